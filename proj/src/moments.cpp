#include "slicefourier/moments.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "slicefourier/error.hpp"

namespace slicefourier {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double l1_norm(std::span<const double> xi) {
    double s = 0.0;
    for (double x : xi) s += std::abs(x);
    return s;
}

// exp(-2 pi i t), with t reduced mod 1 first.
Complex unit_phase(double t) { return std::polar(1.0, -kTwoPi * (t - std::floor(t))); }

MomentValue digit_moment(const DigitIFS& m, std::span<const double> xi, double eps, int cap) {
    if (static_cast<int>(xi.size()) != m.dim())
        fail(ErrorCode::InvalidArgument, "frequency dimension mismatch");
    const double l1 = l1_norm(xi);
    if (l1 == 0.0) return {1.0, 0.0};
    const int depth = truncation_depth(m.base(), l1, eps, cap);
    std::vector<double> eta(xi.begin(), xi.end());
    Complex prod = 1.0;
    for (int k = 1; k <= depth; ++k) {
        for (auto& e : eta) e /= m.base();
        prod *= digit_mask(m, eta);
    }
    return {prod, std::expm1(kTwoPi * l1 * std::pow(static_cast<double>(m.base()), -depth))};
}

MomentValue atomic_moment(const AtomicMeasure& m, std::span<const double> xi) {
    if (static_cast<int>(xi.size()) != m.dim())
        fail(ErrorCode::InvalidArgument, "frequency dimension mismatch");
    Complex s = 0.0;
    for (const auto& a : m.atoms()) {
        double t = 0.0;
        for (int j = 0; j < m.dim(); ++j) t += xi[j] * a.point[j];
        s += a.weight * unit_phase(t);
    }
    return {s, 0.0};
}

}  // namespace

Complex digit_mask(const DigitIFS& m, std::span<const double> eta) {
    Complex s = 0.0;
    const auto& digits = m.digits();
    for (std::size_t i = 0; i < digits.size(); ++i) {
        double t = 0.0;
        for (int j = 0; j < m.dim(); ++j) t += digits[i][j] * eta[j];
        s += m.weights()[i] * unit_phase(t);
    }
    return s;
}

int truncation_depth(int base, double l1, double eps, int depth_cap) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "moment tolerance must be > 0");
    double scale = 1.0;
    for (int k = 1; k <= depth_cap; ++k) {
        scale /= base;
        if (std::expm1(kTwoPi * l1 * scale) <= eps) return k;
    }
    fail(ErrorCode::NonconvergentTolerance,
         "moment truncation needs more than " + std::to_string(depth_cap) + " levels");
}

MomentValue moment(const FactorMeasure& m, double xi, double eps, int depth_cap) {
    const double x[1] = {xi};
    if (const auto* ifs = std::get_if<DigitIFS>(&m)) return digit_moment(*ifs, x, eps, depth_cap);
    return atomic_moment(std::get<AtomicMeasure>(m), x);
}

MomentValue moment(const Measure& m, std::span<const double> xi, double eps, int depth_cap) {
    if (const auto* ifs = std::get_if<DigitIFS>(&m)) return digit_moment(*ifs, xi, eps, depth_cap);
    if (const auto* at = std::get_if<AtomicMeasure>(&m)) return atomic_moment(*at, xi);
    const auto& prod = std::get<ProductMeasure>(m);
    if (static_cast<int>(xi.size()) != prod.dim())
        fail(ErrorCode::InvalidArgument, "frequency dimension mismatch");
    // each factor gets an equal share of the tolerance
    const double share = eps / prod.dim();
    MomentValue out{1.0, 0.0};
    for (int j = 0; j < prod.dim(); ++j) {
        MomentValue f = moment(prod.factors()[j], xi[j], share, depth_cap);
        out.error += f.error;
        out.value *= f.value;
    }
    return out;
}

MomentValue moment(const Measure& m, const Frequency& xi, double eps) {
    std::vector<double> x(xi.begin(), xi.end());
    return moment(m, x, eps);
}

MomentValue model_moment(const DigitIFS& m, std::span<const double> xi, int depth, double eps) {
    if (depth < 1) fail(ErrorCode::InvalidArgument, "quadrature depth must be >= 1");
    if (static_cast<int>(xi.size()) != m.dim())
        fail(ErrorCode::InvalidArgument, "frequency dimension mismatch");
    if (l1_norm(xi) == 0.0) return {1.0, 0.0};
    std::vector<double> eta(xi.begin(), xi.end());
    Complex prod = 1.0;
    for (int k = 1; k <= depth; ++k) {
        for (auto& e : eta) e /= m.base();
        prod *= digit_mask(m, eta);
    }
    const Measure whole = m;
    MomentValue out{prod, 0.0};
    const double share = eps / m.dim();
    for (int c = 0; c < m.dim(); ++c) {
        if (eta[c] == 0.0) continue;
        const auto marg = std::get<DigitIFS>(coordinate_marginal(whole, c));
        const double e[1] = {eta[c]};
        MomentValue t = digit_moment(marg, e, share, kDefaultDepthCap);
        out.value *= t.value;
        out.error += t.error;
    }
    return out;
}

double model_moment_gap(const DigitIFS& m, std::span<const double> xi, int depth) {
    return 2.0 * std::expm1(kTwoPi * l1_norm(xi) * std::pow(static_cast<double>(m.base()), -depth));
}

MomentSequence::MomentSequence(std::vector<Complex> values, std::vector<double> errors)
    : values_(std::move(values)), errors_(std::move(errors)) {
    if (values_.empty()) fail(ErrorCode::InvalidArgument, "moment sequence needs mu^(0)");
    if (errors_.empty()) errors_.assign(values_.size(), 0.0);
    if (errors_.size() != values_.size())
        fail(ErrorCode::InvalidArgument, "moment errors differ in length from values");
}

Complex MomentSequence::operator()(int n) const {
    const int a = n < 0 ? -n : n;
    if (a > order())
        fail(ErrorCode::MissingMoment, "moment of order " + std::to_string(n) + " not available");
    return n < 0 ? std::conj(values_[a]) : values_[a];
}

double MomentSequence::error(int n) const {
    const int a = n < 0 ? -n : n;
    if (a > order())
        fail(ErrorCode::MissingMoment, "moment of order " + std::to_string(n) + " not available");
    return errors_[a];
}

MomentSequence moment_sequence(const Measure& m, int order, double eps) {
    if (dimension(m) != 1) fail(ErrorCode::InvalidArgument, "moment sequence needs a 1-d measure");
    if (order < 0) fail(ErrorCode::InvalidArgument, "moment order must be >= 0");
    std::vector<Complex> v(order + 1);
    std::vector<double> e(order + 1);
    for (int n = 0; n <= order; ++n) {
        const double x[1] = {static_cast<double>(n)};
        MomentValue mv = moment(m, x, eps);
        v[n] = mv.value;
        e[n] = mv.error;
    }
    return MomentSequence(std::move(v), std::move(e));
}

MomentTable::MomentTable(std::shared_ptr<const Measure> m, const std::vector<Frequency>& frequencies,
                         double eps)
    : measure_(std::move(m)) {
    const int d = dimension(*measure_);
    for (const auto& xi : frequencies) {
        if (static_cast<int>(xi.size()) != d)
            fail(ErrorCode::InvalidArgument, "frequency dimension mismatch");
        if (entries_.count(xi)) continue;
        entries_.emplace(xi, moment(*measure_, xi, eps));
    }
}

MomentTable MomentTable::box(std::shared_ptr<const Measure> m, const Frequency& lo,
                             const Frequency& hi, double eps) {
    std::vector<Frequency> all;
    Frequency cur = lo;
    const int d = static_cast<int>(lo.size());
    if (static_cast<int>(hi.size()) != d) fail(ErrorCode::InvalidArgument, "box corners differ in dimension");
    for (int j = 0; j < d; ++j)
        if (hi[j] < lo[j]) return MomentTable(std::move(m), all, eps);
    while (true) {
        all.push_back(cur);
        int j = d - 1;
        while (j >= 0 && cur[j] == hi[j]) cur[j--] = 0;
        if (j < 0) break;
        for (int i = j + 1; i < d; ++i) cur[i] = lo[i];
        ++cur[j];
    }
    return MomentTable(std::move(m), all, eps);
}

MomentValue MomentTable::at(const Frequency& xi) const {
    auto it = entries_.find(xi);
    if (it == entries_.end()) fail(ErrorCode::MissingMoment, "moment not present in table");
    return it->second;
}

MomentValue trig_inner(const MomentFn& moments, const TrigPoly& p, const TrigPoly& q) {
    if (p.dim() != q.dim()) fail(ErrorCode::InvalidArgument, "trig poly dimension mismatch");
    MomentValue out{0.0, 0.0};
    Frequency diff(p.dim());
    for (const auto& [nu, a] : p.terms()) {
        for (const auto& [kappa, b] : q.terms()) {
            for (int j = 0; j < p.dim(); ++j) diff[j] = kappa[j] - nu[j];
            MomentValue mv = moments(diff);
            const Complex w = a * std::conj(b);
            out.value += w * mv.value;
            out.error += std::abs(w) * mv.error;
        }
    }
    return out;
}

MomentValue trig_inner(const Measure& m, const TrigPoly& p, const TrigPoly& q, double eps) {
    std::map<Frequency, MomentValue> cache;
    return trig_inner(
        [&](const Frequency& xi) {
            auto it = cache.find(xi);
            if (it == cache.end()) it = cache.emplace(xi, moment(m, xi, eps)).first;
            return it->second;
        },
        p, q);
}

MomentValue trig_inner(const MomentTable& table, const TrigPoly& p, const TrigPoly& q) {
    return trig_inner([&](const Frequency& xi) { return table.at(xi); }, p, q);
}

namespace {

// Atoms of m, or empty when some factor is not atomic.
std::vector<Atom> atom_list(const Measure& m) {
    if (const auto* a = std::get_if<AtomicMeasure>(&m)) return a->atoms();
    const auto* p = std::get_if<ProductMeasure>(&m);
    if (!p) return {};
    std::vector<Atom> out{{{}, 1.0}};
    for (const auto& f : p->factors()) {
        const auto* a = std::get_if<AtomicMeasure>(&f);
        if (!a) return {};
        std::vector<Atom> next;
        for (const auto& x : out)
            for (const auto& y : a->atoms()) {
                Atom z{x.point, x.weight * y.weight};
                z.point.insert(z.point.end(), y.point.begin(), y.point.end());
                next.push_back(std::move(z));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

double poly_norm_sq(const Measure& m, const TrigPoly& p, const MomentTable* moments) {
    const std::vector<Atom> atoms = atom_list(m);
    if (!atoms.empty()) {
        double s = 0.0;
        for (const auto& a : atoms) s += a.weight * std::norm(p(a.point));
        return s;
    }
    const MomentValue v = moments ? trig_inner(*moments, p, p) : trig_inner(m, p, p);
    return std::max(0.0, v.value.real());
}

}  // namespace slicefourier
