#include "slicefourier/expansion.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "engines.hpp"
#include "slicefourier/classify.hpp"
#include "slicefourier/error.hpp"
#include "slicefourier/kaczmarz.hpp"
#include "slicefourier/moments.hpp"

namespace slicefourier {

QuadratureSpec prefix_exact(int depth) {
    QuadratureSpec q;
    q.mode = QuadratureMode::PrefixExact;
    q.depth = depth;
    return q;
}

QuadratureSpec monte_carlo(std::int64_t samples, std::uint64_t seed, int depth) {
    QuadratureSpec q;
    q.mode = QuadratureMode::MonteCarlo;
    q.samples = samples;
    q.seed = seed;
    q.depth = depth;
    return q;
}

QuadratureSpec parse_quadrature(const std::string& text, std::uint64_t seed) {
    auto bad = [&] { fail(ErrorCode::InvalidArgument, "quadrature must be prefix:K or mc:COUNT, got '" + text + "'"); };
    const auto colon = text.find(':');
    if (colon == std::string::npos) bad();
    const std::string mode = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    auto to_int = [&](const std::string& s) -> long long {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &used);
        } catch (...) {
            bad();
        }
        if (used != s.size() || v < 1) bad();
        return v;
    };
    if (mode == "prefix") {
        QuadratureSpec q = prefix_exact(static_cast<int>(to_int(rest)));
        q.seed = seed;
        return q;
    }
    if (mode == "mc") {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) return monte_carlo(to_int(rest), seed);
        return monte_carlo(to_int(rest.substr(0, c2)), seed, static_cast<int>(to_int(rest.substr(c2 + 1))));
    }
    bad();
    return {};
}

std::string to_string(const QuadratureSpec& q) {
    if (q.mode == QuadratureMode::PrefixExact) return "prefix:" + std::to_string(q.depth);
    return "mc:" + std::to_string(q.samples) + ":" + std::to_string(q.depth);
}

Shape::Shape(std::vector<int> extents) : extent(std::move(extents)), stride(extent.size()) {
    size = 1;
    for (std::size_t i = extent.size(); i-- > 0;) {
        stride[i] = size;
        size *= static_cast<std::size_t>(extent[i]);
    }
}

std::size_t Shape::flat(std::span<const int> index) const {
    std::size_t f = 0;
    for (std::size_t i = 0; i < extent.size(); ++i) f += stride[i] * static_cast<std::size_t>(index[i]);
    return f;
}

std::vector<int> Shape::unflat(std::size_t f) const {
    std::vector<int> idx(extent.size());
    for (std::size_t i = 0; i < extent.size(); ++i) {
        idx[i] = static_cast<int>(f / stride[i]);
        f %= stride[i];
    }
    return idx;
}

Shape CoeffTensor::shape() const {
    std::vector<int> e;
    for (int n : orders) e.push_back(n + 1);
    return Shape(e);
}

Complex CoeffTensor::at(std::span<const int> index) const {
    if (static_cast<int>(index.size()) != dim()) fail(ErrorCode::InvalidArgument, "index dimension mismatch");
    for (int c = 0; c < dim(); ++c)
        if (index[c] < 0 || index[c] > orders[c]) fail(ErrorCode::InvalidArgument, "index outside the tensor");
    return values[shape().flat(index)];
}

double CoeffTensor::energy() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s;
}

namespace detail {

std::vector<Frequency> projected_support(const TrigPoly& f, int c) {
    std::set<Frequency> s;
    for (const auto& [nu, coeff] : f.terms()) s.emplace(nu.begin(), nu.begin() + c);
    if (s.empty()) s.emplace(Frequency(c, 0));
    return {s.begin(), s.end()};
}

std::vector<Complex> aux_values(const std::vector<Complex>& a, double x) {
    const int N = static_cast<int>(a.size()) - 1;
    std::vector<Complex> e(N + 1), g(N + 1, 0.0);
    for (int k = 0; k <= N; ++k) {
        const double ph = k * x;
        e[k] = std::polar(1.0, 2.0 * std::numbers::pi * (ph - std::floor(ph)));
    }
    for (int n = 0; n <= N; ++n)
        for (int k = 0; k <= n; ++k) g[n] += a[n - k] * e[k];
    return g;
}

void dual_transform_axis(std::vector<Complex>& Y, const Shape& shape, int axis,
                         const std::vector<Complex>& a) {
    const int n = shape.extent[axis];
    const std::size_t st = shape.stride[axis];
    const std::size_t outer = shape.size / (st * n);
    std::vector<Complex> line(n), out(n);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < st; ++in) {
            const std::size_t base = o * st * n + in;
            for (int k = 0; k < n; ++k) line[k] = Y[base + k * st];
            for (int i = 0; i < n; ++i) {
                Complex s = 0.0;
                for (int k = 0; k <= i; ++k) s += std::conj(a[i - k]) * line[k];
                out[i] = s;
            }
            for (int i = 0; i < n; ++i) Y[base + i * st] = out[i];
        }
    }
}

EngineResult one_dim(const Measure& m, const TrigPoly& f, int N) {
    int span = 0;
    for (const auto& [nu, c] : f.terms()) span = std::max(span, std::abs(nu[0]));
    const MomentSequence mom = moment_sequence(m, N + span);
    const AuxMatrix A = aux_matrix(mom, N);
    EngineResult r;
    r.coeffs = aux_coefficients(mom, A, f);
    const MomentValue nn = trig_inner(
        [&](const Frequency& xi) { return MomentValue{mom(xi[0]), mom.error(xi[0])}; }, f, f);
    r.norm_sq = nn.value.real();
    r.error_estimate = nn.error;
    return r;
}

}  // namespace detail

namespace {

void check_inputs(const Measure& m, const TrigPoly& f, const std::vector<int>& orders) {
    const int d = dimension(m);
    if (f.dim() != d) fail(ErrorCode::InvalidArgument, "trig poly and measure differ in dimension");
    if (static_cast<int>(orders.size()) != d) fail(ErrorCode::InvalidArgument, "need one truncation order per coordinate");
    for (int n : orders)
        if (n < 0) fail(ErrorCode::InvalidArgument, "truncation orders must be >= 0");
    if (!slice_singularity_gate(m))
        fail(ErrorCode::UnsupportedMeasure, "measure is not slice singular in the given variable order");
}

CoeffTensor to_tensor(detail::EngineResult&& r, const std::vector<int>& orders, const QuadratureSpec& q) {
    CoeffTensor t;
    t.orders = orders;
    t.values = std::move(r.coeffs);
    t.standard_errors = std::move(r.standard_errors);
    t.quadrature = q;
    t.norm_sq = r.norm_sq;
    t.error_estimate = r.error_estimate;
    return t;
}

detail::EngineResult run_staged(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                                const QuadratureSpec& q, int threads) {
    if (dimension(m) == 1) return detail::one_dim(m, f, orders[0]);
    if (q.mode == QuadratureMode::MonteCarlo) return detail::monte_carlo(m, f, orders, q, threads);
    if (const auto* ifs = std::get_if<DigitIFS>(&m)) return detail::digit_staged(*ifs, f, orders, q, threads);
    if (const auto* at = std::get_if<AtomicMeasure>(&m)) return detail::atomic_staged(*at, f, orders);
    return detail::product_staged(std::get<ProductMeasure>(m), f, orders);
}

}  // namespace

CoeffTensor analyze(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                    const QuadratureSpec& q, int threads) {
    check_inputs(m, f, orders);
    if (dimension(m) == 1) return to_tensor(detail::one_dim(m, f, orders[0]), orders, q);
    if (q.mode == QuadratureMode::MonteCarlo)
        return to_tensor(detail::monte_carlo(m, f, orders, q, threads), orders, q);
    if (const auto* ifs = std::get_if<DigitIFS>(&m))
        return to_tensor(detail::digit_direct(*ifs, f, orders, q, threads), orders, q);
    if (const auto* at = std::get_if<AtomicMeasure>(&m))
        return to_tensor(detail::atomic_direct(*at, f, orders), orders, q);
    return to_tensor(detail::product_direct(std::get<ProductMeasure>(m), f, orders), orders, q);
}

CoeffTensor analyze_staged(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                           const QuadratureSpec& q, int threads) {
    check_inputs(m, f, orders);
    if (q.mode == QuadratureMode::MonteCarlo && dimension(m) > 1)
        fail(ErrorCode::InvalidArgument, "the staged route needs prefix-exact quadrature");
    return to_tensor(run_staged(m, f, orders, q, threads), orders, q);
}

std::vector<Complex> synthesize(const CoeffTensor& c, const std::vector<std::vector<double>>& points) {
    const Shape sh = c.shape();
    const int d = c.dim();
    std::vector<Complex> out;
    out.reserve(points.size());
    for (const auto& x : points) {
        if (static_cast<int>(x.size()) != d) fail(ErrorCode::InvalidArgument, "point dimension mismatch");
        std::vector<std::vector<Complex>> e(d);
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k <= c.orders[j]; ++k) {
                const double ph = k * x[j];
                e[j].push_back(std::polar(1.0, 2.0 * std::numbers::pi * (ph - std::floor(ph))));
            }
        }
        Complex s = 0.0;
        for (std::size_t i = 0; i < sh.size; ++i) {
            const auto idx = sh.unflat(i);
            Complex term = c.values[i];
            for (int j = 0; j < d; ++j) term *= e[j][idx[j]];
            s += term;
        }
        out.push_back(s);
    }
    return out;
}

TrigPoly partial_sum(const CoeffTensor& c, std::span<const int> orders) {
    TrigPoly p(c.dim());
    const Shape sh = c.shape();
    for (std::size_t i = 0; i < sh.size; ++i) {
        auto idx = sh.unflat(i);
        bool inside = true;
        for (int j = 0; j < c.dim(); ++j) inside = inside && idx[j] <= orders[j];
        if (inside) p.add(idx, c.values[i]);
    }
    return p;
}

namespace {

// Squared iterated error at orders M for the given coefficient/stage-norm data.
double iterated_error_sq(double norm_sq, const std::vector<Complex>& coeffs,
                         const std::vector<std::vector<double>>& stage_norms,
                         const std::vector<int>& orders, const std::vector<int>& M) {
    const int d = static_cast<int>(orders.size());
    double e = norm_sq;
    for (int c = 1; c < d; ++c) {
        std::vector<int> ext;
        for (int j = c; j < d; ++j) ext.push_back(orders[j] + 1);
        const Shape sh(ext);
        std::vector<int> idx(M.begin() + c, M.end());
        for (int j = 0; j < M[c]; ++j) {
            idx[0] = j;
            e -= stage_norms[c][sh.flat(idx)];
        }
    }
    std::vector<int> ext;
    for (int n : orders) ext.push_back(n + 1);
    const Shape sh(ext);
    std::vector<int> idx(M);
    for (int j = 0; j <= M[0]; ++j) {
        idx[0] = j;
        e -= std::norm(coeffs[sh.flat(idx)]);
    }
    return e;
}

}  // namespace

ReconstructionResult reconstruction_error(const Measure& m, const TrigPoly& f,
                                          const std::vector<int>& orders, const QuadratureSpec& q,
                                          int threads) {
    check_inputs(m, f, orders);
    const int d = dimension(m);
    if (q.mode == QuadratureMode::MonteCarlo && d > 2)
        fail(ErrorCode::UnsupportedMeasure,
             "monte-carlo sweeps need nested conditional norms; use prefix-exact quadrature for d > 2");
    detail::EngineResult r = run_staged(m, f, orders, q, threads);

    ReconstructionResult out;
    // exact moments of the measure on the difference box
    const Frequency lo_f = f.min_frequency(), hi_f = f.max_frequency();
    Frequency lo(d), hi(d);
    for (int c = 0; c < d; ++c) {
        lo[c] = std::min(0, lo_f[c]) - std::max(orders[c], hi_f[c]);
        hi[c] = std::max(orders[c], hi_f[c]) - std::min(0, lo_f[c]);
    }
    const auto shared = std::make_shared<const Measure>(m);
    const MomentTable table = MomentTable::box(shared, lo, hi);

    std::vector<int> ext;
    for (int n : orders) ext.push_back(n + 1);
    const Shape sh(ext);
    auto rect_error = [&](const std::vector<int>& M) {
        std::vector<std::pair<Frequency, Complex>> s;
        for (std::size_t i = 0; i < sh.size; ++i) {
            auto idx = sh.unflat(i);
            bool inside = true;
            for (int j = 0; j < d; ++j) inside = inside && idx[j] <= M[j];
            if (inside) s.emplace_back(std::move(idx), r.coeffs[i]);
        }
        TrigPoly g = f;
        for (const auto& [n, cv] : s) g.add(n, -cv);
        return std::sqrt(poly_norm_sq(m, g, &table));
    };

    std::vector<int> M(d, 0);
    for (std::size_t row = 0; row < sh.size; ++row) {
        SweepRow sr;
        sr.orders = M;
        sr.iterated_error = std::sqrt(std::max(0.0, iterated_error_sq(r.norm_sq, r.coeffs, r.stage_norms, orders, M)));
        if (!r.batch_coeffs.empty()) {
            const std::size_t B = r.batch_coeffs.size();
            std::vector<double> vals;
            double mean = 0.0;
            for (std::size_t b = 0; b < B; ++b) {
                const double e = std::sqrt(std::max(
                    0.0, iterated_error_sq(r.norm_sq, r.batch_coeffs[b], r.batch_stage_norms[b], orders, M)));
                vals.push_back(e);
                mean += e / B;
            }
            double var = 0.0;
            for (double v : vals) var += (v - mean) * (v - mean);
            sr.iterated_stderr = std::sqrt(var / (B - 1) / B);
        }
        sr.rectangular_error = rect_error(M);
        out.sweep.push_back(std::move(sr));
        // first index fastest
        for (int j = 0; j < d; ++j) {
            if (M[j] < orders[j]) {
                ++M[j];
                break;
            }
            M[j] = 0;
        }
    }
    out.error = out.sweep.back().rectangular_error;
    out.coefficients = to_tensor(std::move(r), orders, q);
    return out;
}

}  // namespace slicefourier
