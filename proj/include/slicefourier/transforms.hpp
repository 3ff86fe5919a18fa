#pragma once

#include <span>
#include <vector>

#include "slicefourier/expansion.hpp"
#include "slicefourier/measure.hpp"
#include "slicefourier/moments.hpp"
#include "slicefourier/trig_poly.hpp"

namespace slicefourier {

inline constexpr double kMaxDiskRadius = 0.999;

struct SeriesValue {
    Complex value;
    double tail_bound = 0.0;
};

// C_mu(f)(w) = sum_{n>=0} <f, e_n> w^n, summed until the geometric tail |f|_1 |w|^{n+1} / (1-|w|)
// falls below tol.
SeriesValue cauchy_transform(const Measure& m, const TrigPoly& f, Complex w, double tol = 1e-13,
                             double r_max = kMaxDiskRadius);

// Taylor coefficients of b(w) = 1 - 1/C_mu(1)(w) up to order N.
class InnerFunctionSeries {
public:
    InnerFunctionSeries(std::vector<Complex> coefficients, std::vector<Complex> moments);

    int order() const { return static_cast<int>(b_.size()) - 1; }
    const std::vector<Complex>& coefficients() const { return b_; }
    const std::vector<Complex>& moments() const { return moments_; }
    // Truncated sum; the tail bound uses sum |b_n|^2 <= 1.
    SeriesValue evaluate(Complex w, double r_max = kMaxDiskRadius) const;
    // max_n |[(1 - b) H]_n - [1 + b]_n| with H = 1 + 2 sum_{n>=1} mu^(n) w^n.
    double herglotz_defect() const;
    // Coefficients of b(w)/w, orders 0..N-1.
    std::vector<Complex> divided_by_w() const;

private:
    std::vector<Complex> b_;
    std::vector<Complex> moments_;
};

// Reciprocal by the triangular convolution recursion.
std::vector<Complex> series_reciprocal(std::span<const Complex> c, int N);
InnerFunctionSeries inner_function(const Measure& m, int N, double eps = kDefaultMomentTol);

// Truncated power series on the polydisk with the coefficient tensor of `analyze`.
struct PowerSeriesGrid {
    CoeffTensor coeffs;

    int dim() const { return coeffs.dim(); }
    Complex evaluate(std::span<const Complex> z) const;
    double l2_norm_sq() const { return coeffs.energy(); }
};

PowerSeriesGrid nct_1d(const Measure& m, const TrigPoly& f, int N);
PowerSeriesGrid nct_d(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                      const QuadratureSpec& q = {}, int threads = 1);

// max_n |V(f)_{n+1} - V(e_{-1}(f - <f,1>))_n| for n < N.
double backward_shift_deviation(const Measure& m, const TrigPoly& f, int N);
// max |V(e_{-1})_n - (b/w)_n| for n < N.
double inner_nct_deviation(const Measure& m, int N);

// max |direct - staged| over the coefficient tensor.
double nct_composition_deviation(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                                 const QuadratureSpec& q = {}, int threads = 1);

struct ModelResidualReport {
    double max_residual = 0.0;
    int slices = 0;
    int series_order = 0;  // truncation of the slice series
};

// For sampled slice points x of a 2-d measure: max over x and k <= max_k of
// |sum_{n=k}^{L} V_n conj(b_{n-k})|, V the slice series of f(x, .) and b the slice inner function,
// both truncated at L.
ModelResidualReport model_space_residual(const Measure& m, const TrigPoly& f, int max_k, int series_order,
                                         int prefixes = 16, int depth = 12, std::uint64_t seed = 0);

// Coefficients of the transform built from the reversed disintegration order: the tensor of
// the coordinate-swapped measure and function, transposed back.
CoeffTensor reversed_order_coefficients(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                                        const QuadratureSpec& q = {}, int threads = 1);

struct EqualityReport {
    bool equal = false;
    double deviation = 0.0;
    double tolerance = 0.0;
};

// Compares both disintegration orders over the function set. Equal when the deviation is
// within 10x the quadrature tolerance.
EqualityReport nct_equality_test(const Measure& m, const std::vector<TrigPoly>& fs,
                                 const std::vector<int>& orders, const QuadratureSpec& q = {},
                                 int threads = 1);

bool swap_symmetric(const Measure& m, double tol = 1e-12);

// max deviation of V1(f) against T' V2(T f) over the function set.
double symmetry_reflection_test(const Measure& m, const std::vector<TrigPoly>& fs,
                                const std::vector<int>& orders, const QuadratureSpec& q = {},
                                int threads = 1);

struct BoundaryRow {
    double r1 = 0.0;
    double r2 = 0.0;
    double error = 0.0;       // |V(f)(r1 e(x1), r2 e(x2)) - f| in L2(mu)
    double tail_bound = 0.0;  // bound on the part of the series beyond the orders
};

// Radii run r1 through the list with r2 at the first radius, then r2 through the rest with r1
// at the last radius.
std::vector<BoundaryRow> boundary_limit_test(const Measure& m, const TrigPoly& f, const std::vector<double>& radii,
                                             const std::vector<int>& orders, const QuadratureSpec& q = {},
                                             double tail_tol = 1e-6, int threads = 1);

TrigPoly swap_coordinates(const TrigPoly& f);
CoeffTensor transposed(const CoeffTensor& c);

}  // namespace slicefourier
