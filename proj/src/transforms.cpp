#include "slicefourier/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slicefourier/disintegration.hpp"
#include "slicefourier/error.hpp"
#include "slicefourier/kaczmarz.hpp"

namespace slicefourier {

namespace {

void require_dim(const Measure& m, int d, const char* what) {
    if (dimension(m) != d)
        fail(ErrorCode::InvalidArgument, std::string(what) + " needs a " + std::to_string(d) + "-dimensional measure");
}

void check_disk(Complex w, double r_max) {
    if (!(std::abs(w) <= r_max))
        fail(ErrorCode::PointOutsideDisk,
             "|w| = " + std::to_string(std::abs(w)) + " exceeds r_max = " + std::to_string(r_max));
}

double max_deviation(const CoeffTensor& a, const CoeffTensor& b) {
    if (a.orders != b.orders) fail(ErrorCode::InvalidArgument, "coefficient tensors differ in shape");
    double d = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
}

double max_stderr(const CoeffTensor& c) {
    double s = 0.0;
    for (double v : c.standard_errors) s = std::max(s, v);
    return s;
}

int frequency_reach(const TrigPoly& f, int c) {
    if (f.empty()) return 0;
    return std::max(std::abs(f.min_frequency()[c]), std::abs(f.max_frequency()[c]));
}

}  // namespace

SeriesValue cauchy_transform(const Measure& m, const TrigPoly& f, Complex w, double tol, double r_max) {
    require_dim(m, 1, "cauchy_transform");
    check_disk(w, r_max);
    const double r = std::abs(w);
    const double l1 = f.l1_norm();
    int n_max = 0;
    if (r > 0.0 && l1 > 0.0) {
        const double need = std::log(tol * (1.0 - r) / l1) / std::log(r) - 1.0;
        n_max = std::max(0, static_cast<int>(std::ceil(need)));
    }
    const MomentSequence mu = moment_sequence(m, n_max + frequency_reach(f, 0));
    Complex sum = 0.0, wn = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        Complex Fn = 0.0;
        for (const auto& [nu, a] : f.terms()) Fn += a * mu(n - nu[0]);
        sum += Fn * wn;
        wn *= w;
    }
    return {sum, l1 * std::pow(r, n_max + 1) / (1.0 - r)};
}

std::vector<Complex> series_reciprocal(std::span<const Complex> c, int N) {
    if (N < 0 || static_cast<int>(c.size()) <= N) fail(ErrorCode::InvalidArgument, "series too short for reciprocal");
    if (std::abs(c[0]) < 1e-14) fail(ErrorCode::SingularReciprocal, "constant term vanishes");
    std::vector<Complex> r(N + 1);
    r[0] = 1.0 / c[0];
    for (int n = 1; n <= N; ++n) {
        Complex s = 0.0;
        for (int j = 1; j <= n; ++j) s += c[j] * r[n - j];
        r[n] = -s / c[0];
    }
    return r;
}

InnerFunctionSeries::InnerFunctionSeries(std::vector<Complex> coefficients, std::vector<Complex> moments)
    : b_(std::move(coefficients)), moments_(std::move(moments)) {
    if (b_.empty() || moments_.size() < b_.size())
        fail(ErrorCode::InvalidArgument, "inner function needs coefficients and matching moments");
}

SeriesValue InnerFunctionSeries::evaluate(Complex w, double r_max) const {
    check_disk(w, r_max);
    Complex v = 0.0;
    double energy = 0.0;
    for (int n = order(); n >= 0; --n) v = v * w + b_[n];
    for (const auto& b : b_) energy += std::norm(b);
    const double r = std::abs(w);
    const double tail = std::sqrt(std::max(0.0, 1.0 - energy)) * std::pow(r, order() + 1) / std::sqrt(1.0 - r * r);
    return {v, tail};
}

double InnerFunctionSeries::herglotz_defect() const {
    const int N = order();
    std::vector<Complex> H(N + 1);
    H[0] = 1.0;
    for (int n = 1; n <= N; ++n) H[n] = 2.0 * moments_[n];
    double d = 0.0;
    for (int n = 0; n <= N; ++n) {
        Complex p = H[n];
        for (int j = 0; j <= n; ++j) p -= b_[j] * H[n - j];
        const Complex rhs = (n == 0 ? 1.0 : 0.0) + b_[n];
        d = std::max(d, std::abs(p - rhs));
    }
    return d;
}

std::vector<Complex> InnerFunctionSeries::divided_by_w() const {
    return std::vector<Complex>(b_.begin() + 1, b_.end());
}

InnerFunctionSeries inner_function(const Measure& m, int N, double eps) {
    require_dim(m, 1, "inner_function");
    if (N < 1) fail(ErrorCode::InvalidArgument, "inner function order must be >= 1");
    const MomentSequence mu = moment_sequence(m, N, eps);
    const auto r = series_reciprocal(mu.values(), N);
    std::vector<Complex> b(N + 1);
    b[0] = 1.0 - r[0];
    for (int n = 1; n <= N; ++n) b[n] = -r[n];
    return InnerFunctionSeries(std::move(b), mu.values());
}

Complex PowerSeriesGrid::evaluate(std::span<const Complex> z) const {
    const int d = dim();
    if (static_cast<int>(z.size()) != d) fail(ErrorCode::InvalidArgument, "point dimension mismatch");
    std::vector<std::vector<Complex>> pw(d);
    for (int c = 0; c < d; ++c) {
        if (!(std::abs(z[c]) < 1.0)) fail(ErrorCode::PointOutsideDisk, "point outside the open polydisk");
        pw[c].assign(coeffs.orders[c] + 1, 1.0);
        for (int n = 1; n <= coeffs.orders[c]; ++n) pw[c][n] = pw[c][n - 1] * z[c];
    }
    const Shape sh = coeffs.shape();
    Complex s = 0.0;
    for (std::size_t j = 0; j < sh.size; ++j) {
        const auto idx = sh.unflat(j);
        Complex t = coeffs.values[j];
        for (int c = 0; c < d; ++c) t *= pw[c][idx[c]];
        s += t;
    }
    return s;
}

PowerSeriesGrid nct_1d(const Measure& m, const TrigPoly& f, int N) {
    require_dim(m, 1, "nct_1d");
    return {analyze(m, f, {N})};
}

PowerSeriesGrid nct_d(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                      const QuadratureSpec& q, int threads) {
    return {analyze(m, f, orders, q, threads)};
}

double backward_shift_deviation(const Measure& m, const TrigPoly& f, int N) {
    require_dim(m, 1, "backward_shift_deviation");
    if (N < 1) fail(ErrorCode::InvalidArgument, "shift check needs N >= 1");
    const CoeffTensor v = analyze(m, f, {N});
    const Complex mean = trig_inner(m, f, TrigPoly::constant(1)).value;
    TrigPoly h = f;
    h.add({0}, -mean);
    const CoeffTensor w = analyze(m, h.shifted({-1}), {N - 1});
    double d = 0.0;
    for (int n = 0; n < N; ++n) d = std::max(d, std::abs(v.values[n + 1] - w.values[n]));
    return d;
}

double inner_nct_deviation(const Measure& m, int N) {
    require_dim(m, 1, "inner_nct_deviation");
    const CoeffTensor v = analyze(m, TrigPoly::exponential({-1}), {N});
    const auto bw = inner_function(m, N + 1).divided_by_w();
    double d = 0.0;
    for (int n = 0; n <= N; ++n) d = std::max(d, std::abs(v.values[n] - bw[n]));
    return d;
}

double nct_composition_deviation(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                                 const QuadratureSpec& q, int threads) {
    return max_deviation(analyze(m, f, orders, q, threads), analyze_staged(m, f, orders, q, threads));
}

ModelResidualReport model_space_residual(const Measure& m, const TrigPoly& f, int max_k, int series_order,
                                         int prefixes, int depth, std::uint64_t seed) {
    require_dim(m, 2, "model_space_residual");
    if (max_k < 0 || series_order < max_k || prefixes < 1)
        fail(ErrorCode::InvalidArgument, "residual needs 0 <= max_k <= series order and prefixes >= 1");
    const int L = series_order;
    const auto slices = sample_slices(m, prefixes, depth, seed, L + frequency_reach(f, 1));
    ModelResidualReport rep;
    rep.series_order = L;
    rep.slices = static_cast<int>(slices.size());
    for (const auto& s : slices) {
        TrigPoly fx(1);
        for (const auto& [nu, a] : f.terms())
            fx.add({nu[1]}, a * std::polar(1.0, 2.0 * std::numbers::pi * nu[0] * s.point[0]));
        const AuxMatrix A = aux_matrix(s.moments, L);
        const auto V = aux_coefficients(s.moments, A, fx);
        const auto r = series_reciprocal(s.moments.values(), L);
        std::vector<Complex> b(L + 1);
        b[0] = 1.0 - r[0];
        for (int n = 1; n <= L; ++n) b[n] = -r[n];
        for (int k = 0; k <= max_k; ++k) {
            Complex acc = 0.0;
            for (int n = k; n <= L; ++n) acc += V[n] * std::conj(b[n - k]);
            rep.max_residual = std::max(rep.max_residual, std::abs(acc));
        }
    }
    return rep;
}

TrigPoly swap_coordinates(const TrigPoly& f) {
    const int order[2] = {1, 0};
    return f.permuted(order);
}

CoeffTensor transposed(const CoeffTensor& c) {
    if (c.dim() != 2) fail(ErrorCode::InvalidArgument, "transpose needs a 2-index tensor");
    CoeffTensor t = c;
    t.orders = {c.orders[1], c.orders[0]};
    const Shape src = c.shape(), dst = t.shape();
    for (std::size_t j = 0; j < src.size; ++j) {
        const auto idx = src.unflat(j);
        const int swapped[2] = {idx[1], idx[0]};
        t.values[dst.flat(swapped)] = c.values[j];
        if (!c.standard_errors.empty()) t.standard_errors[dst.flat(swapped)] = c.standard_errors[j];
    }
    return t;
}

CoeffTensor reversed_order_coefficients(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                                        const QuadratureSpec& q, int threads) {
    require_dim(m, 2, "reversed disintegration");
    if (orders.size() != 2) fail(ErrorCode::InvalidArgument, "orders must have 2 entries");
    const int order[2] = {1, 0};
    return transposed(analyze(permuted(m, order), swap_coordinates(f), {orders[1], orders[0]}, q, threads));
}

EqualityReport nct_equality_test(const Measure& m, const std::vector<TrigPoly>& fs, const std::vector<int>& orders,
                                 const QuadratureSpec& q, int threads) {
    EqualityReport rep;
    rep.tolerance = 1e-9;
    for (const auto& f : fs) {
        const CoeffTensor v1 = analyze(m, f, orders, q, threads);
        const CoeffTensor v2 = reversed_order_coefficients(m, f, orders, q, threads);
        rep.deviation = std::max(rep.deviation, max_deviation(v1, v2));
        rep.tolerance = std::max({rep.tolerance, v1.error_estimate + v2.error_estimate,
                                  3.0 * (max_stderr(v1) + max_stderr(v2))});
    }
    rep.equal = rep.deviation <= 10.0 * rep.tolerance;
    return rep;
}

bool swap_symmetric(const Measure& m, double tol) {
    require_dim(m, 2, "swap_symmetric");
    if (const auto* ifs = std::get_if<DigitIFS>(&m)) {
        for (std::size_t i = 0; i < ifs->size(); ++i) {
            const auto& a = ifs->digits()[i];
            bool found = false;
            for (std::size_t j = 0; j < ifs->size() && !found; ++j) {
                const auto& b = ifs->digits()[j];
                found = a[0] == b[1] && a[1] == b[0] && std::abs(ifs->weights()[i] - ifs->weights()[j]) <= tol;
            }
            if (!found) return false;
        }
        return true;
    }
    if (const auto* at = std::get_if<AtomicMeasure>(&m)) {
        for (const auto& a : at->atoms()) {
            bool found = false;
            for (const auto& b : at->atoms())
                found = found || (std::abs(a.point[0] - b.point[1]) <= tol && std::abs(a.point[1] - b.point[0]) <= tol &&
                                  std::abs(a.weight - b.weight) <= tol);
            if (!found) return false;
        }
        return true;
    }
    const auto& fac = std::get<ProductMeasure>(m).factors();
    if (fac[0].index() != fac[1].index()) return false;
    if (const auto* x = std::get_if<DigitIFS>(&fac[0])) {
        const auto& y = std::get<DigitIFS>(fac[1]);
        if (x->base() != y.base() || x->digits() != y.digits()) return false;
        for (std::size_t i = 0; i < x->size(); ++i)
            if (std::abs(x->weights()[i] - y.weights()[i]) > tol) return false;
        return true;
    }
    const auto& x = std::get<AtomicMeasure>(fac[0]).atoms();
    const auto& y = std::get<AtomicMeasure>(fac[1]).atoms();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i].point[0] - y[i].point[0]) > tol || std::abs(x[i].weight - y[i].weight) > tol) return false;
    return true;
}

double symmetry_reflection_test(const Measure& m, const std::vector<TrigPoly>& fs, const std::vector<int>& orders,
                                const QuadratureSpec& q, int threads) {
    if (!swap_symmetric(m)) fail(ErrorCode::NotSymmetric, "measure is not invariant under the coordinate swap");
    if (orders.size() != 2) fail(ErrorCode::InvalidArgument, "orders must have 2 entries");
    double d = 0.0;
    for (const auto& f : fs) {
        const CoeffTensor v1 = analyze(m, f, orders, q, threads);
        const CoeffTensor v2 = reversed_order_coefficients(m, swap_coordinates(f), {orders[1], orders[0]}, q, threads);
        d = std::max(d, max_deviation(v1, transposed(v2)));
    }
    return d;
}

std::vector<BoundaryRow> boundary_limit_test(const Measure& m, const TrigPoly& f, const std::vector<double>& radii,
                                             const std::vector<int>& orders, const QuadratureSpec& q,
                                             double tail_tol, int threads) {
    require_dim(m, 2, "boundary_limit_test");
    if (radii.empty()) fail(ErrorCode::InvalidArgument, "radii list is empty");
    for (double r : radii) {
        if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::InvalidArgument, "radii must lie in (0,1)");
        if (r > kMaxDiskRadius) fail(ErrorCode::RadiusTooCloseToOne, "radius " + std::to_string(r) + " exceeds 0.999");
    }
    const CoeffTensor c = analyze(m, f, orders, q, threads);
    // energy left outside the orders; differences at the rounding level of |f|^2 are dropped
    const double tail_energy = std::max(0.0, c.norm_sq - c.energy() - 1e-14 * c.norm_sq);

    std::vector<std::pair<double, double>> path;
    for (double r : radii) path.emplace_back(r, radii.front());
    for (std::size_t i = 1; i < radii.size(); ++i) path.emplace_back(radii.back(), radii[i]);

    const Shape sh = c.shape();
    std::vector<BoundaryRow> rows;
    for (const auto& [r1, r2] : path) {
        const double rr[2] = {r1, r2};
        double full = 1.0, kept = 1.0;
        for (int k = 0; k < 2; ++k) {
            full /= 1.0 - rr[k] * rr[k];
            kept *= (1.0 - std::pow(rr[k], 2 * (orders[k] + 1))) / (1.0 - rr[k] * rr[k]);
        }
        BoundaryRow row{r1, r2, 0.0, std::sqrt(tail_energy * std::max(0.0, full - kept))};
        if (row.tail_bound > tail_tol)
            fail(ErrorCode::RadiusTooCloseToOne, "series tail bound " + std::to_string(row.tail_bound) +
                                                     " at radius (" + std::to_string(r1) + ", " + std::to_string(r2) +
                                                     ") exceeds tolerance; raise the orders");
        TrigPoly diff = Complex(-1.0) * f;
        for (std::size_t j = 0; j < sh.size; ++j) {
            const auto idx = sh.unflat(j);
            diff.add({idx[0], idx[1]}, c.values[j] * std::pow(r1, idx[0]) * std::pow(r2, idx[1]));
        }
        row.error = std::sqrt(poly_norm_sq(m, diff));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace slicefourier
