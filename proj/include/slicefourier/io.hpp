#pragma once

#include <string>

#include <json.hpp>

#include "slicefourier/classify.hpp"
#include "slicefourier/expansion.hpp"
#include "slicefourier/kaczmarz.hpp"
#include "slicefourier/measure.hpp"
#include "slicefourier/transforms.hpp"
#include "slicefourier/trig_poly.hpp"

namespace slicefourier {

using Json = nlohmann::ordered_json;

// {"kind":"digit_ifs","base":b,"dim":d,"digits":[[..],..],"weights":[..]}
// {"kind":"atomic","dim":d,"atoms":[{"point":[..],"weight":w},..]}
// {"kind":"product","factors":[<1-d digit_ifs or atomic>,..]}
Measure parse_measure(const Json& j);
Measure load_measure(const std::string& path);
Json to_json(const Measure& m);

// {"frequencies":[[..],..],"coefficients":[[re,im],..]}
TrigPoly parse_trig_poly(const Json& j, int dim);
TrigPoly load_trig_poly(const std::string& path, int dim);
Json to_json(const TrigPoly& f);

Json to_json(Complex z);
Json to_json(const CoeffTensor& c);
Json to_json(const ClassificationReport& r);
Json to_json(const InnerFunctionSeries& b);

std::string format_double(double x);
std::string coeff_tensor_csv(const CoeffTensor& c);
// One line per row n, complex entries as re,im pairs.
std::string aux_matrix_csv(const AuxMatrix& a);
std::string sweep_csv(const ReconstructionResult& r);
std::string classification_table(const ClassificationReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace slicefourier
