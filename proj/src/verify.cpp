#include "slicefourier/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "slicefourier/chaos.hpp"
#include "slicefourier/classify.hpp"
#include "slicefourier/error.hpp"
#include "slicefourier/kaczmarz.hpp"
#include "slicefourier/moments.hpp"
#include "slicefourier/transforms.hpp"

namespace slicefourier {

namespace {

class Suite {
public:
    explicit Suite(std::string name) : name_(std::move(name)) {}

    void check(const std::string& name, double value, double tolerance) {
        const bool ok = std::isfinite(value) && value <= tolerance;
        checks_.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", ok}});
        pass_ = pass_ && ok;
    }
    void flag(const std::string& name, bool ok) {
        checks_.push_back({{"name", name}, {"pass", ok}});
        pass_ = pass_ && ok;
    }
    void note(const std::string& name, Json value) {
        checks_.push_back({{"name", name}, {"value", std::move(value)}, {"pass", true}});
    }
    Json result() const { return {{"suite", name_}, {"pass", pass_}, {"checks", checks_}}; }

private:
    std::string name_;
    Json checks_ = Json::array();
    bool pass_ = true;
};

std::vector<int> default_orders(int d) {
    if (d == 1) return {16};
    if (d == 2) return {6, 6};
    return std::vector<int>(d, 2);
}

void measure_suite(const Measure& m, const VerifyOptions& o, Suite& s) {
    const int d = dimension(m);
    const int R = d <= 2 ? 4 : 2;
    s.check("moment_at_zero", std::abs(moment(m, Frequency(d, 0)).value - 1.0), 1e-15);

    double bound = 0.0, sym = 0.0;
    std::vector<int> lo(d, -R), hi(d, R);
    const Shape sh(std::vector<int>(d, 2 * R + 1));
    for (std::size_t j = 0; j < sh.size; ++j) {
        Frequency xi = sh.unflat(j), neg(d);
        for (int c = 0; c < d; ++c) {
            xi[c] -= R;
            neg[c] = -xi[c];
        }
        const Complex v = moment(m, xi).value;
        bound = std::max(bound, std::abs(v) - 1.0);
        sym = std::max(sym, std::abs(moment(m, neg).value - std::conj(v)));
    }
    s.check("moment_modulus_at_most_one", bound, 1e-12);
    s.check("conjugate_symmetry", sym, 1e-14);

    double min_eig = 0.0;
    for (int c = 0; c < d; ++c) {
        const MomentSequence mu = moment_sequence(coordinate_marginal(m, c), 16);
        Eigen::MatrixXcd T(17, 17);
        for (int n = 0; n <= 16; ++n)
            for (int k = 0; k <= 16; ++k) T(n, k) = mu(k - n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T, Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    s.check("toeplitz_gram_negative_part", -min_eig, 1e-10);

    if (const auto* ifs = std::get_if<DigitIFS>(&m)) {
        const std::size_t count = 20000;
        const int depth = 30;
        const auto pts = chaos_sample(*ifs, count, depth, o.seed);
        double worst = 0.0;
        for (int k = 1; k <= 3; ++k) {
            Frequency xi(d, 0);
            xi[(k - 1) % d] = k;
            if (d > 1) xi[d - 1] += 1;
            Complex emp = 0.0;
            for (const auto& p : pts) {
                double ph = 0.0;
                for (int c = 0; c < d; ++c) ph += xi[c] * p[c];
                emp += std::polar(1.0, -2.0 * std::numbers::pi * ph);
            }
            emp /= static_cast<double>(count);
            worst = std::max(worst, std::abs(emp - moment(m, xi).value));
        }
        s.check("chaos_game_moments", worst, 5.0 / std::sqrt(static_cast<double>(count)));
    }

    if (d >= 2 && slice_singularity_gate(m)) {
        const TrigPoly f = random_trig_poly(d, 4, 3, o.seed, 1);
        const QuadratureSpec q = o.quadrature.mode == QuadratureMode::PrefixExact ? o.quadrature : prefix_exact(8);
        const CoeffTensor c = analyze_staged(m, f, std::vector<int>(d, 0), q, o.threads);
        const Complex direct = trig_inner(m, f, TrigPoly::constant(d)).value;
        s.check("disintegration_mean", std::abs(c.values[0] - direct), 1e-12 + c.error_estimate);
    }
}

void kaczmarz_suite(const Measure& m, const VerifyOptions& o, Suite& s) {
    const int d = dimension(m);
    for (int c = 0; c < d; ++c) {
        const std::string tag = "x" + std::to_string(c) + "_";
        const Measure mc = coordinate_marginal(m, c);
        const int N = 64;
        const MomentSequence mu = moment_sequence(mc, N + 8);
        s.check(tag + "consistency_residual", consistency_residual(aux_matrix(mu, N), mu), 1e-10);

        double rise = 0.0, excess = 0.0, identity = 0.0;
        for (int t = 0; t < 3; ++t) {
            const TrigPoly f = random_trig_poly(1, 4, 6, o.seed, 10 * c + t);
            const ParsevalReport p = parseval_defect(mu, f, 24);
            for (std::size_t n = 1; n < p.partial_sums.size(); ++n)
                rise = std::max(rise, p.partial_sums[n - 1] - p.partial_sums[n]);
            excess = std::max(excess, p.partial_sums.back() - p.norm_sq * (1.0 + 1e-8));
            for (int n : {0, 4, 24}) {
                TrigPoly r = f;
                for (int k = 0; k <= n; ++k) r.add({k}, -p.coefficients[k]);
                const double err_sq = trig_inner(mc, r, r).value.real();
                identity = std::max(identity, std::abs(err_sq - (p.norm_sq - p.partial_sums[n])));
            }
        }
        s.check(tag + "partial_sums_decrease", rise, 0.0);
        s.check(tag + "bessel_excess", excess, 0.0);
        s.check(tag + "error_identity", identity, 1e-9);
        if (!slice_singularity_gate(mc)) {
            const ParsevalReport p = parseval_defect(mu, TrigPoly::exponential({-1}), N);
            s.flag(tag + "nonsingular_defect_persists", p.defect > 0.5);
        }
    }
}

void expansion_suite(const Measure& m, const VerifyOptions& o, Suite& s) {
    const int d = dimension(m);
    if (!slice_singularity_gate(m)) {
        s.note("skipped", "measure is not slice singular");
        return;
    }
    const auto orders = default_orders(d);
    const QuadratureSpec& q = o.quadrature;
    const bool exact = q.mode == QuadratureMode::PrefixExact;

    const CoeffTensor one = analyze(m, TrigPoly::constant(d), orders, q, o.threads);
    double unit = std::abs(one.values[0] - 1.0);
    for (std::size_t j = 1; j < one.values.size(); ++j) unit = std::max(unit, std::abs(one.values[j]));
    s.check("constant_maps_to_unit_tensor", unit, exact ? 1e-12 : 1e-12 + 6.0 * (one.standard_errors.empty() ? 0.0 : *std::max_element(one.standard_errors.begin(), one.standard_errors.end())));

    double composition = 0.0, excess = 0.0;
    for (int t = 0; t < 3; ++t) {
        const TrigPoly f = random_trig_poly(d, 4, 3, o.seed, 100 + t);
        const CoeffTensor c = analyze(m, f, orders, q, o.threads);
        excess = std::max(excess, c.energy() - c.norm_sq * (1.0 + 1e-8));
        if (exact && d > 1) composition = std::max(composition, nct_composition_deviation(m, f, orders, q, o.threads));
    }
    if (exact && d > 1) s.check("direct_vs_staged", composition, 1e-8);
    if (exact) s.check("bessel_excess", excess, 0.0);

    if (d <= 2 || exact) {
        const TrigPoly f = random_trig_poly(d, 3, 2, o.seed, 200);
        const std::vector<int> small(d, d == 1 ? 8 : (d == 2 ? 4 : 2));
        const ReconstructionResult r = reconstruction_error(m, f, small, q, o.threads);
        double rise = 0.0;
        for (std::size_t i = 1; i < r.sweep.size(); ++i) {
            const double slack = exact ? 0.0 : 3.0 * r.sweep[i].iterated_stderr;
            rise = std::max(rise, r.sweep[i].iterated_error - r.sweep[i - 1].iterated_error - slack);
        }
        s.check("sweep_nonincreasing", rise, exact ? 1e-9 : 0.0);
    }
}

void transforms_suite(const Measure& m, const VerifyOptions& o, Suite& s) {
    const int d = dimension(m);
    for (int c = 0; c < d; ++c) {
        const std::string tag = "x" + std::to_string(c) + "_";
        const Measure mc = coordinate_marginal(m, c);
        if (!slice_singularity_gate(mc)) {
            s.note(tag + "skipped", "marginal is not singular");
            continue;
        }
        const InnerFunctionSeries b = inner_function(mc, 64);
        s.check(tag + "inner_at_zero", std::abs(b.coefficients()[0]), 1e-10);
        s.check(tag + "herglotz_defect", b.herglotz_defect(), 1e-10);
        s.check(tag + "inner_vs_nct", inner_nct_deviation(mc, 64), 1e-9);
        const InnerFunctionSeries bb = inner_function(mc, 512);
        double excess = -1.0;
        for (int i = 1; i <= 32; ++i)
            for (int j = 0; j < 32; ++j) {
                const Complex w = std::polar(0.95 * i / 32.0, 2.0 * std::numbers::pi * j / 32.0);
                excess = std::max(excess, std::abs(bb.evaluate(w).value) - std::abs(w));
            }
        s.check(tag + "inner_modulus_excess", excess, 1e-6);
        double shift = 0.0;
        for (int t = 0; t < 5; ++t)
            shift = std::max(shift, backward_shift_deviation(mc, random_trig_poly(1, 4, 5, o.seed, 300 + 10 * c + t), 32));
        s.check(tag + "backward_shift", shift, 1e-9);
    }
    if (d == 2 && slice_singularity_gate(m)) {
        std::vector<TrigPoly> fs;
        for (int a = 0; a <= 1; ++a)
            for (int b = 0; b <= 1; ++b) fs.push_back(TrigPoly::exponential({a, b}));
        const EqualityReport e = nct_equality_test(m, fs, {4, 4}, o.quadrature, o.threads);
        s.note("orders_give_equal_transforms", Json{{"equal", e.equal}, {"deviation", e.deviation}, {"tolerance", e.tolerance}});
        if (swap_symmetric(m))
            s.check("symmetry_reflection", symmetry_reflection_test(m, fs, {4, 4}, o.quadrature, o.threads), 1e-4);
    }
}

void classify_suite(const Measure& m, const VerifyOptions&, Suite& s) {
    const auto* ifs = std::get_if<DigitIFS>(&m);
    if (!ifs) {
        s.note("slice_singular", slice_singularity_gate(m));
        return;
    }
    const ClassificationReport r = classify(*ifs);
    bool all = true;
    for (const auto& c : r.coordinates) all = all && c.verdict == Verdict::Singular;
    s.flag("overall_matches_coordinates", all == r.overall);
    s.note("slice_singular", r.overall);

    bool marginals = true;
    for (int c = 0; c < ifs->dim(); ++c) {
        const int keep[1] = {c};
        const Measure mc = marginal(m, keep);
        marginals = marginals && classify(std::get<DigitIFS>(mc)).coordinates[0].verdict == r.coordinates[c].verdict;
    }
    s.flag("marginal_verdicts_agree", marginals);

    auto digits = ifs->digits();
    auto weights = ifs->weights();
    std::reverse(digits.begin(), digits.end());
    std::reverse(weights.begin(), weights.end());
    const ClassificationReport p = classify(DigitIFS(ifs->base(), digits, weights));
    bool same = p.overall == r.overall;
    for (std::size_t c = 0; c < r.coordinates.size(); ++c)
        same = same && p.coordinates[c].verdict == r.coordinates[c].verdict &&
               p.coordinates[c].reduced == r.coordinates[c].reduced;
    s.flag("relabeling_invariant", same);
}

}  // namespace

TrigPoly random_trig_poly(int dim, int terms, int max_freq, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    TrigPoly f(dim);
    const double span = 2.0 * max_freq + 1.0;
    for (int t = 0; t < terms; ++t) {
        Frequency nu(dim);
        for (auto& v : nu) v = static_cast<int>(std::floor(rng.uniform() * span)) - max_freq;
        const double re = 2.0 * rng.uniform() - 1.0;
        const double im = 2.0 * rng.uniform() - 1.0;
        f.add(nu, {re, im});
    }
    return f;
}

Json verify_suite(const Measure& m, const std::string& suite, const VerifyOptions& opts) {
    using Runner = void (*)(const Measure&, const VerifyOptions&, Suite&);
    const std::pair<const char*, Runner> suites[] = {{"measure", measure_suite},
                                                     {"kaczmarz", kaczmarz_suite},
                                                     {"expansion", expansion_suite},
                                                     {"transforms", transforms_suite},
                                                     {"classify", classify_suite}};
    if (suite == "all") {
        Json parts = Json::array();
        bool pass = true;
        for (const auto& [name, run] : suites) {
            Suite s(name);
            run(m, opts, s);
            Json r = s.result();
            pass = pass && r["pass"].get<bool>();
            parts.push_back(std::move(r));
        }
        return {{"suite", "all"}, {"pass", pass}, {"suites", parts}};
    }
    for (const auto& [name, run] : suites) {
        if (suite == name) {
            Suite s(name);
            run(m, opts, s);
            return s.result();
        }
    }
    fail(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
}

}  // namespace slicefourier
