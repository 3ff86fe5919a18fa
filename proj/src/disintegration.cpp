#include "slicefourier/disintegration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slicefourier/chaos.hpp"
#include "slicefourier/error.hpp"

namespace slicefourier {

namespace {

constexpr double kLawTol = 1e-13;

Complex level_factor(std::span<const double> law, double eta) {
    Complex s = 0.0;
    for (std::size_t t = 0; t < law.size(); ++t) {
        if (law[t] == 0.0) continue;
        const double ph = t * eta;
        s += std::polar(law[t], -2.0 * std::numbers::pi * (ph - std::floor(ph)));
    }
    return s;
}

bool same_key(const std::vector<double>& la, const std::vector<int>& na,
              const std::vector<double>& lb, const std::vector<int>& nb) {
    for (std::size_t t = 0; t < la.size(); ++t) {
        if (std::abs(la[t] - lb[t]) > kLawTol) return false;
        if (na[t] != nb[t]) return false;
    }
    return true;
}

}  // namespace

DigitIFS digit_law_ifs(int base, std::span<const double> law) {
    std::vector<DigitVector> digits;
    std::vector<double> weights;
    for (std::size_t t = 0; t < law.size(); ++t) {
        if (law[t] <= 0.0) continue;
        digits.push_back({static_cast<int>(t)});
        weights.push_back(law[t]);
    }
    return DigitIFS(base, std::move(digits), std::move(weights));
}

MomentValue SliceLaw::moment(double xi, double eps) const {
    if (xi == 0.0) return {1.0, 0.0};
    double eta = xi;
    Complex prod = 1.0;
    for (const auto& law : levels) {
        eta /= base;
        prod *= level_factor(law, eta);
    }
    const FactorMeasure t = digit_law_ifs(base, tail);
    MomentValue tv = slicefourier::moment(t, eta, eps);
    return {prod * tv.value, tv.error};
}

MomentSequence SliceLaw::moments(int order, double eps) const {
    if (order < 0) fail(ErrorCode::InvalidArgument, "moment order must be >= 0");
    std::vector<Complex> v(order + 1);
    std::vector<double> e(order + 1);
    for (int n = 0; n <= order; ++n) {
        MomentValue mv = moment(n, eps);
        v[n] = mv.value;
        e[n] = mv.error;
    }
    return MomentSequence(std::move(v), std::move(e));
}

SliceLaw slice_law(const DigitIFS& m, std::span<const DigitVector> prefix) {
    const int d = m.dim();
    if (d < 2) fail(ErrorCode::DimensionTooSmall, "slice law needs dimension >= 2");
    SliceLaw out;
    out.base = m.base();
    out.prefix.assign(prefix.begin(), prefix.end());
    out.tail.assign(m.base(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) out.tail[m.digits()[i][d - 1]] += m.weights()[i];
    for (const auto& a : prefix) {
        if (static_cast<int>(a.size()) != d - 1)
            fail(ErrorCode::InvalidArgument, "slice prefix digits must have dimension d-1");
        std::vector<double> p(m.base(), 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto& dv = m.digits()[i];
            if (!std::equal(a.begin(), a.end(), dv.begin())) continue;
            p[dv[d - 1]] += m.weights()[i];
            total += m.weights()[i];
        }
        if (total == 0.0) fail(ErrorCode::PrefixOutsideSupport, "slice prefix digit not in the marginal support");
        for (auto& x : p) x /= total;
        out.levels.push_back(std::move(p));
    }
    return out;
}

SliceLaw slice_law(const ProductMeasure& m, int levels) {
    const auto* last = std::get_if<DigitIFS>(&m.factors().back());
    if (!last) fail(ErrorCode::UnsupportedMeasure, "product slice law needs a digit IFS last factor");
    SliceLaw out;
    out.base = last->base();
    out.tail.assign(last->base(), 0.0);
    for (std::size_t i = 0; i < last->size(); ++i) out.tail[last->digits()[i][0]] += last->weights()[i];
    out.levels.assign(levels, out.tail);
    return out;
}

AtomicMeasure conditional_slice(const AtomicMeasure& m, std::span<const double> prefix_point) {
    const int d = m.dim();
    if (d < 2) fail(ErrorCode::DimensionTooSmall, "conditional slice needs dimension >= 2");
    if (static_cast<int>(prefix_point.size()) != d - 1)
        fail(ErrorCode::InvalidArgument, "slice point must have dimension d-1");
    std::vector<Atom> atoms;
    double total = 0.0;
    for (const auto& a : m.atoms()) {
        if (!std::equal(prefix_point.begin(), prefix_point.end(), a.point.begin())) continue;
        atoms.push_back({{a.point[d - 1]}, a.weight});
        total += a.weight;
    }
    if (atoms.empty()) fail(ErrorCode::PrefixOutsideSupport, "slice point is not a marginal atom");
    for (auto& a : atoms) a.weight /= total;
    // renormalized weights may miss 1 by rounding; fold the residue into the first atom
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    atoms.front().weight += 1.0 - s;
    return AtomicMeasure(std::move(atoms));
}

DigitDisintegration::DigitDisintegration(const DigitIFS& m) : ifs_(m) {
    const int d = m.dim();
    const int b = m.base();
    // weights of projections onto coordinates 0..c-1, c = 0..d
    std::vector<std::map<DigitVector, double>> proj(d + 1);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto& dv = m.digits()[i];
        for (int c = 0; c <= d; ++c) proj[c][DigitVector(dv.begin(), dv.begin() + c)] += m.weights()[i];
    }
    stages_.assign(d, {});
    class_of_.assign(d, {});
    for (int c = d - 1; c >= 0; --c) {
        for (const auto& [a, wa] : proj[c]) {
            std::vector<double> law(b, 0.0);
            std::vector<int> next(b, -1);
            DigitVector ext = a;
            ext.push_back(0);
            for (int t = 0; t < b; ++t) {
                ext.back() = t;
                auto it = proj[c + 1].find(ext);
                if (it == proj[c + 1].end()) continue;
                law[t] = it->second / wa;
                next[t] = c + 1 < d ? class_of_[c + 1].at(ext) : 0;
            }
            auto& stage = stages_[c];
            int r = 0;
            while (r < static_cast<int>(stage.size()) && !same_key(stage[r].law, stage[r].next, law, next)) ++r;
            if (r == static_cast<int>(stage.size())) {
                ClassData cd;
                cd.law = law;
                cd.next = next;
                stage.push_back(std::move(cd));
            }
            stage[r].prob += wa;
            stage[r].members.push_back({a, wa});
            class_of_[c].emplace(a, r);
        }
        for (auto& cd : stages_[c]) {
            for (auto& mem : cd.members) mem.prob /= cd.prob;
            if (c + 1 >= d) continue;
            for (int t = 0; t < b; ++t) {
                if (cd.next[t] < 0) continue;
                auto it = std::find_if(cd.out.begin(), cd.out.end(),
                                       [&](const Transition& tr) { return tr.to == cd.next[t]; });
                if (it == cd.out.end()) {
                    cd.out.push_back({cd.next[t], 0.0, std::vector<double>(b, 0.0)});
                    it = cd.out.end() - 1;
                }
                it->prob += cd.law[t];
                it->digit_law[t] = cd.law[t];
            }
            for (auto& tr : cd.out)
                for (auto& x : tr.digit_law) x /= tr.prob;
        }
    }
    joint_of_digit_.resize(m.size());
    std::map<std::vector<int>, int> joint_index;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto& dv = m.digits()[i];
        std::vector<int> chain;
        for (int c = 1; c < d; ++c) chain.push_back(class_of_[c].at(DigitVector(dv.begin(), dv.begin() + c)));
        auto [it, inserted] = joint_index.try_emplace(chain, static_cast<int>(joint_.size()));
        if (inserted) joint_.push_back({chain, 0.0, {}});
        auto& jc = joint_[it->second];
        jc.prob += m.weights()[i];
        jc.digits.emplace_back(i, m.weights()[i]);
        joint_of_digit_[i] = it->second;
    }
    for (auto& jc : joint_)
        for (auto& [i, p] : jc.digits) p /= jc.prob;
    for (int c = 0; c < d; ++c) {
        std::vector<double> law(b, 0.0);
        for (std::size_t i = 0; i < m.size(); ++i) law[m.digits()[i][c]] += m.weights()[i];
        marginal_ifs_.push_back(digit_law_ifs(b, law));
        marginal_laws_.push_back(std::move(law));
    }
}

int DigitDisintegration::class_of(int c, const DigitVector& prefix) const {
    auto it = class_of_[c].find(prefix);
    if (it == class_of_[c].end()) fail(ErrorCode::PrefixOutsideSupport, "digit prefix not in the marginal support");
    return it->second;
}

}  // namespace slicefourier

namespace slicefourier {

std::vector<SampledSlice> sample_slices(const Measure& m, int count, int depth, std::uint64_t seed,
                                        int order, double eps) {
    const int d = dimension(m);
    if (d < 2) fail(ErrorCode::DimensionTooSmall, "slices need dimension >= 2");
    if (count < 1 || depth < 1) fail(ErrorCode::InvalidArgument, "slice count and depth must be >= 1");
    std::vector<SampledSlice> out;
    if (const auto* ifs = std::get_if<DigitIFS>(&m)) {
        std::vector<DigitVector> prefix(depth);
        for (int i = 0; i < count; ++i) {
            const auto idx = chaos_digit_indices(*ifs, static_cast<std::uint64_t>(i), depth, seed);
            for (int k = 0; k < depth; ++k) {
                const auto& dv = ifs->digits()[idx[k]];
                prefix[k].assign(dv.begin(), dv.end() - 1);
            }
            out.push_back({point_from_digits(ifs->base(), prefix), slice_law(*ifs, prefix).moments(order, eps)});
        }
    } else if (const auto* at = std::get_if<AtomicMeasure>(&m)) {
        const std::vector<int> head = [&] {
            std::vector<int> h(d - 1);
            for (int j = 0; j < d - 1; ++j) h[j] = j;
            return h;
        }();
        const auto marg = std::get<AtomicMeasure>(marginal(m, head));
        for (const auto& a : marg.atoms()) {
            if (static_cast<int>(out.size()) == count) break;
            const Measure slice = conditional_slice(*at, a.point);
            out.push_back({a.point, moment_sequence(slice, order, eps)});
        }
    } else {
        const auto& prod = std::get<ProductMeasure>(m);
        const MomentSequence last = moment_sequence(to_measure(prod.factors().back()), order, eps);
        for (int i = 0; i < count; ++i) {
            std::vector<double> x(d - 1);
            for (int j = 0; j < d - 1; ++j) {
                const auto& f = prod.factors()[j];
                const std::uint64_t stream = static_cast<std::uint64_t>(i) * d + j;
                if (const auto* fi = std::get_if<DigitIFS>(&f)) {
                    x[j] = chaos_sample(*fi, 1, depth, CounterRng::hash(seed, stream, 0)).front()[0];
                } else {
                    const auto& atoms = std::get<AtomicMeasure>(f).atoms();
                    std::vector<double> w;
                    for (const auto& a : atoms) w.push_back(a.weight);
                    CounterRng rng(seed, stream);
                    x[j] = atoms[rng.categorical(w)].point[0];
                }
            }
            out.push_back({std::move(x), last});
        }
    }
    return out;
}

}  // namespace slicefourier
