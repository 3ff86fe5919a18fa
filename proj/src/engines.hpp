#pragma once

#include <vector>

#include "slicefourier/disintegration.hpp"
#include "slicefourier/expansion.hpp"

namespace slicefourier::detail {

struct EngineResult {
    std::vector<Complex> coeffs;
    // stage_norms[c], c = 1..d-1: |H_c|^2 over (n_c..n_{d-1}), where H_c is f integrated
    // against the dual sequences of coordinates c..d-1 (a function of x_0..x_{c-1}).
    std::vector<std::vector<double>> stage_norms;
    double norm_sq = 0.0;
    double error_estimate = 0.0;
    std::vector<double> standard_errors;
    // monte-carlo batch estimates, same layout as coeffs / stage_norms
    std::vector<std::vector<Complex>> batch_coeffs;
    std::vector<std::vector<std::vector<double>>> batch_stage_norms;
};

EngineResult one_dim(const Measure& m, const TrigPoly& f, int N);

EngineResult digit_direct(const DigitIFS& m, const TrigPoly& f, const std::vector<int>& orders,
                          const QuadratureSpec& q, int threads);
EngineResult digit_staged(const DigitIFS& m, const TrigPoly& f, const std::vector<int>& orders,
                          const QuadratureSpec& q, int threads);

EngineResult atomic_direct(const AtomicMeasure& m, const TrigPoly& f, const std::vector<int>& orders);
EngineResult atomic_staged(const AtomicMeasure& m, const TrigPoly& f, const std::vector<int>& orders);

EngineResult product_direct(const ProductMeasure& m, const TrigPoly& f, const std::vector<int>& orders);
EngineResult product_staged(const ProductMeasure& m, const TrigPoly& f, const std::vector<int>& orders);

EngineResult monte_carlo(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                         const QuadratureSpec& q, int threads);

// Distinct projections of the support of f onto coordinates 0..c-1, in map order.
std::vector<Frequency> projected_support(const TrigPoly& f, int c);

// g_n(x) = sum_{k<=n} a_{n-k} e^{2 pi i k x} for n = 0..N.
std::vector<Complex> aux_values(const std::vector<Complex>& a, double x);

// Z(.., n_c, ..) = sum_{k<=n_c} conj(a_{n_c-k}) Y(.., k, ..) along axis c of a row-major array.
void dual_transform_axis(std::vector<Complex>& Y, const Shape& shape, int axis,
                         const std::vector<Complex>& a);

}  // namespace slicefourier::detail
