#include "slicefourier/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "slicefourier/error.hpp"

namespace slicefourier {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(ErrorCode::ConfigError, std::string("missing field '") + key + "'");
    return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(ErrorCode::ConfigError, std::string("field '") + what + "' has the wrong type");
    }
}

FactorMeasure parse_factor(const Json& j) {
    Measure m = parse_measure(j);
    if (dimension(m) != 1) fail(ErrorCode::ConfigError, "product factors must be 1-dimensional");
    if (auto* ifs = std::get_if<DigitIFS>(&m)) return *ifs;
    if (auto* at = std::get_if<AtomicMeasure>(&m)) return *at;
    fail(ErrorCode::ConfigError, "product factors must be digit_ifs or atomic");
}

Complex parse_complex(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    fail(ErrorCode::ConfigError, "complex values must be numbers or [re, im] pairs");
}

Json nested(const CoeffTensor& c, const Shape& sh, int axis, std::vector<int>& idx) {
    Json arr = Json::array();
    for (int n = 0; n <= c.orders[axis]; ++n) {
        idx[axis] = n;
        if (axis + 1 == c.dim())
            arr.push_back(to_json(c.values[sh.flat(idx)]));
        else
            arr.push_back(nested(c, sh, axis + 1, idx));
    }
    return arr;
}

}  // namespace

Measure parse_measure(const Json& j) {
    const std::string kind = get_as<std::string>(field(j, "kind"), "kind");
    if (kind == "digit_ifs") {
        const int base = get_as<int>(field(j, "base"), "base");
        auto digits = get_as<std::vector<DigitVector>>(field(j, "digits"), "digits");
        auto weights = get_as<std::vector<double>>(field(j, "weights"), "weights");
        if (j.contains("dim")) {
            const int dim = get_as<int>(j.at("dim"), "dim");
            for (const auto& d : digits)
                if (static_cast<int>(d.size()) != dim)
                    fail(ErrorCode::ConfigError, "digit vector length differs from dim");
        }
        return DigitIFS(base, std::move(digits), std::move(weights));
    }
    if (kind == "atomic") {
        std::vector<Atom> atoms;
        for (const auto& a : field(j, "atoms")) {
            atoms.push_back({get_as<std::vector<double>>(field(a, "point"), "point"),
                             get_as<double>(field(a, "weight"), "weight")});
        }
        if (j.contains("dim"))
            for (const auto& a : atoms)
                if (static_cast<int>(a.point.size()) != get_as<int>(j.at("dim"), "dim"))
                    fail(ErrorCode::ConfigError, "atom point length differs from dim");
        return AtomicMeasure(std::move(atoms));
    }
    if (kind == "product") {
        std::vector<FactorMeasure> factors;
        for (const auto& f : field(j, "factors")) factors.push_back(parse_factor(f));
        return ProductMeasure(std::move(factors));
    }
    if (kind == "density" || kind == "density_product" || kind == "weighted")
        fail(ErrorCode::ConfigError, "density-weighted measures are recognized but not supported; "
                                     "use digit_ifs, atomic or product");
    fail(ErrorCode::ConfigError, "unknown measure kind '" + kind + "'");
}

Measure load_measure(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::ConfigError, path + ": " + e.what());
    }
    return parse_measure(j);
}

Json to_json(const Measure& m) {
    return std::visit(
        [](const auto& x) -> Json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, DigitIFS>) {
                return {{"kind", "digit_ifs"}, {"base", x.base()}, {"dim", x.dim()},
                        {"digits", x.digits()}, {"weights", x.weights()}};
            } else if constexpr (std::is_same_v<T, AtomicMeasure>) {
                Json atoms = Json::array();
                for (const auto& a : x.atoms()) atoms.push_back({{"point", a.point}, {"weight", a.weight}});
                return {{"kind", "atomic"}, {"dim", x.dim()}, {"atoms", atoms}};
            } else {
                Json factors = Json::array();
                for (const auto& f : x.factors()) factors.push_back(to_json(to_measure(f)));
                return {{"kind", "product"}, {"factors", factors}};
            }
        },
        m);
}

TrigPoly parse_trig_poly(const Json& j, int dim) {
    const auto& freqs = field(j, "frequencies");
    const auto& coeffs = field(j, "coefficients");
    if (!freqs.is_array() || !coeffs.is_array() || freqs.size() != coeffs.size())
        fail(ErrorCode::ConfigError, "frequencies and coefficients must be arrays of equal length");
    TrigPoly f(dim);
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        auto nu = get_as<Frequency>(freqs[i], "frequencies");
        if (static_cast<int>(nu.size()) != dim)
            fail(ErrorCode::ConfigError, "frequency length differs from the measure dimension");
        f.add(nu, parse_complex(coeffs[i]));
    }
    return f;
}

TrigPoly load_trig_poly(const std::string& path, int dim) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::ConfigError, path + ": " + e.what());
    }
    return parse_trig_poly(j, dim);
}

Json to_json(const TrigPoly& f) {
    Json freqs = Json::array(), coeffs = Json::array();
    for (const auto& [nu, a] : f.terms()) {
        freqs.push_back(nu);
        coeffs.push_back(to_json(a));
    }
    return {{"frequencies", freqs}, {"coefficients", coeffs}};
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CoeffTensor& c) {
    const Shape sh = c.shape();
    std::vector<int> idx(c.dim(), 0);
    Json j = {{"orders", c.orders},
              {"quadrature", to_string(c.quadrature)},
              {"norm_sq", c.norm_sq},
              {"energy", c.energy()},
              {"bessel_defect", c.norm_sq - c.energy()},
              {"error_estimate", c.error_estimate},
              {"values", nested(c, sh, 0, idx)}};
    if (!c.standard_errors.empty()) {
        double worst = 0.0;
        for (double s : c.standard_errors) worst = std::max(worst, s);
        j["max_standard_error"] = worst;
    }
    return j;
}

Json to_json(const ClassificationReport& r) {
    Json coords = Json::array();
    for (const auto& c : r.coordinates) {
        Json reduced = Json::array();
        for (const auto& [d, w] : c.reduced) reduced.push_back({{"digit", d}, {"weight", w}});
        Json e = {{"coordinate", c.coordinate}, {"reduced", reduced}, {"lebesgue_weight", c.lebesgue_weight},
                  {"full_digit_set", c.full}, {"verdict", to_string(c.verdict)}};
        if (!c.warning.empty()) e["warning"] = c.warning;
        coords.push_back(e);
    }
    return {{"base", r.base}, {"coordinates", coords}, {"overall", r.overall}};
}

Json to_json(const InnerFunctionSeries& b) {
    Json coeffs = Json::array();
    for (const auto& v : b.coefficients()) coeffs.push_back(to_json(v));
    return {{"order", b.order()}, {"coefficients", coeffs}, {"herglotz_defect", b.herglotz_defect()}};
}

std::string format_double(double x) {
    if (x == 0.0) x = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string coeff_tensor_csv(const CoeffTensor& c) {
    std::ostringstream out;
    for (int k = 0; k < c.dim(); ++k) out << 'n' << k << ',';
    out << "re,im";
    if (!c.standard_errors.empty()) out << ",stderr";
    out << '\n';
    const Shape sh = c.shape();
    for (std::size_t j = 0; j < sh.size; ++j) {
        for (int n : sh.unflat(j)) out << n << ',';
        out << format_double(c.values[j].real()) << ',' << format_double(c.values[j].imag());
        if (!c.standard_errors.empty()) out << ',' << format_double(c.standard_errors[j]);
        out << '\n';
    }
    return out.str();
}

std::string aux_matrix_csv(const AuxMatrix& a) {
    std::ostringstream out;
    for (int n = 0; n <= a.order(); ++n) {
        for (int k = 0; k <= a.order(); ++k) {
            if (k) out << ',';
            const Complex v = a(n, k);
            out << format_double(v.real()) << ',' << format_double(v.imag());
        }
        out << '\n';
    }
    return out.str();
}

std::string sweep_csv(const ReconstructionResult& r) {
    std::ostringstream out;
    const int d = r.coefficients.dim();
    for (int k = 0; k < d; ++k) out << 'N' << k << ',';
    out << "iterated_error,iterated_stderr,rectangular_error\n";
    for (const auto& row : r.sweep) {
        for (int n : row.orders) out << n << ',';
        out << format_double(row.iterated_error) << ',' << format_double(row.iterated_stderr) << ','
            << format_double(row.rectangular_error) << '\n';
    }
    return out.str();
}

std::string classification_table(const ClassificationReport& r) {
    std::ostringstream out;
    out << "base " << r.base << '\n';
    for (const auto& c : r.coordinates) {
        out << "x" << c.coordinate << "  " << to_string(c.verdict) << "  weights";
        for (const auto& [d, w] : c.reduced) out << "  " << d << ":" << w;
        if (!c.warning.empty()) out << "  (" << c.warning << ")";
        out << '\n';
    }
    out << "slice singular in any order: " << (r.overall ? "yes" : "no") << '\n';
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::ConfigError, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

}  // namespace slicefourier
