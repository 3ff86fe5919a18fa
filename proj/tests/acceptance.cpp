// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "slicefourier/classify.hpp"
#include "slicefourier/expansion.hpp"
#include "slicefourier/io.hpp"
#include "slicefourier/kaczmarz.hpp"
#include "slicefourier/moments.hpp"
#include "slicefourier/transforms.hpp"
#include "slicefourier/verify.hpp"

using namespace slicefourier;

namespace {

std::string config(const char* name) { return std::string(SLICEFOURIER_CONFIG_DIR) + "/" + name; }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double max_diff(const CoeffTensor& a, const CoeffTensor& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
}

std::vector<TrigPoly> basket(int dim, std::uint64_t seed) {
    std::vector<TrigPoly> fs;
    for (int t = 0; t < 10; ++t) fs.push_back(random_trig_poly(dim, 4, 4, seed, t));
    return fs;
}

std::vector<TrigPoly> basis2() {
    std::vector<TrigPoly> fs;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) fs.push_back(TrigPoly::exponential({a, b}));
    return fs;
}

Outcome c1() {
    const Measure menger = load_measure(config("menger.json"));
    const Measure ms[] = {load_measure(config("cantor.json")), load_measure(config("half_atomic.json")),
                          load_measure(config("delta0.json")), coordinate_marginal(menger, 0)};
    double worst = 0.0;
    for (const auto& m : ms) {
        const MomentSequence mu = moment_sequence(m, 64);
        worst = std::max(worst, consistency_residual(aux_matrix(mu, 64), mu));
    }
    return {worst <= 1e-10, fmt("max |T.A - I| = %.3g (tol 1e-10)", worst)};
}

Outcome c2() {
    const Measure m = load_measure(config("four_atom_product.json"));
    double err = 0.0, energy = 0.0;
    for (int mask = 1; mask < 16; ++mask) {
        TrigPoly f(2);
        for (int b = 0; b < 4; ++b)
            if (mask & (1 << b)) f.add({b / 2, b % 2}, Complex(1.0 + b, 0.25 * b - 0.5));
        const CoeffTensor c = analyze(m, f, {1, 1});
        for (double x : {0.0, 0.5})
            for (double y : {0.0, 0.5}) {
                const std::vector<double> p = {x, y};
                err = std::max(err, std::abs(synthesize(c, {p})[0] - f(p)));
            }
        err = std::max(err, reconstruction_error(m, f, {1, 1}).error);
        energy = std::max(energy, std::abs(c.energy() - c.norm_sq));
    }
    return {err <= 1e-12 && energy <= 1e-12, fmt("round-trip error %.3g, |sum|c|^2 - |f|^2| %.3g (tol 1e-12)", err, energy)};
}

Outcome c3() {
    const Measure cantor = load_measure(config("cantor.json"));
    const Measure cc = load_measure(config("cantor2.json"));
    bool ok = true;
    double worst_excess = -1.0, worst_ratio = 0.0;
    for (const auto& f : basket(1, 3)) {
        const CoeffTensor c = analyze(cantor, f, {32});
        double s = 0.0, at8 = 0.0;
        for (int n = 0; n <= 32; ++n) {
            const double next = s + std::norm(c.values[n]);
            ok = ok && next >= s;
            s = next;
            if (n == 8) at8 = s;
        }
        worst_excess = std::max(worst_excess, s - c.norm_sq * (1.0 + 1e-8));
        ok = ok && (c.norm_sq - s) < (c.norm_sq - at8);
        worst_ratio = std::max(worst_ratio, (c.norm_sq - s) / (c.norm_sq - at8));
    }
    for (const auto& f : basket(2, 4)) {
        const CoeffTensor c = analyze(cc, f, {16, 16}, prefix_exact(12));
        double prev = 0.0, at4 = 0.0, at16 = 0.0;
        for (int k = 0; k <= 16; ++k) {
            double s = 0.0;
            for (int a = 0; a <= k; ++a)
                for (int b = 0; b <= k; ++b) {
                    const int idx[2] = {a, b};
                    s += std::norm(c.at(idx));
                }
            ok = ok && s >= prev;
            prev = s;
            if (k == 4) at4 = s;
            if (k == 16) at16 = s;
        }
        worst_excess = std::max(worst_excess, at16 - c.norm_sq * (1.0 + 1e-8));
        ok = ok && (c.norm_sq - at16) < (c.norm_sq - at4);
        worst_ratio = std::max(worst_ratio, (c.norm_sq - at16) / (c.norm_sq - at4));
    }
    ok = ok && worst_excess <= 0.0;
    return {ok, fmt("monotone partial sums, max excess over |f|^2(1+1e-8) %.3g, max defect ratio large/small %.3g", worst_excess,
                    worst_ratio)};
}

Outcome c4() {
    const Measure cc = load_measure(config("cantor2.json"));
    const TrigPoly f = TrigPoly::exponential({1, 1});
    const ReconstructionResult exact = reconstruction_error(cc, f, {8, 8}, prefix_exact(12));
    double rise = -1.0;
    for (std::size_t i = 1; i < exact.sweep.size(); ++i)
        rise = std::max(rise, exact.sweep[i].iterated_error - exact.sweep[i - 1].iterated_error);
    const ReconstructionResult mc = reconstruction_error(cc, f, {4, 4}, monte_carlo(100000, 0));
    double z = -1e9;
    for (std::size_t i = 1; i < mc.sweep.size(); ++i) {
        const double d = mc.sweep[i].iterated_error - mc.sweep[i - 1].iterated_error;
        const double se = std::hypot(mc.sweep[i].iterated_stderr, mc.sweep[i - 1].iterated_stderr);
        z = std::max(z, se > 0.0 ? d / se : (d > 0.0 ? 1e9 : 0.0));
    }
    return {rise <= 1e-9 && z <= 3.0,
            fmt("prefix:12 max rise %.3g (tol 1e-9); mc max rise %.3g standard errors (tol 3)", rise, z)};
}

Outcome c5() {
    const Measure ms[] = {load_measure(config("delta0.json")), load_measure(config("half_atomic.json")),
                          load_measure(config("cantor.json"))};
    double b0 = 0.0, modulus = -1.0, nct = 0.0, closed = 0.0;
    for (int i = 0; i < 3; ++i) {
        const InnerFunctionSeries b = inner_function(ms[i], 64);
        b0 = std::max(b0, std::abs(b.coefficients()[0]));
        nct = std::max(nct, inner_nct_deviation(ms[i], 64));
        if (i < 2)
            for (int n = 0; n <= 64; ++n) closed = std::max(closed, std::abs(b.coefficients()[n] - (n == i + 1 ? 1.0 : 0.0)));
        const InnerFunctionSeries big = inner_function(ms[i], 512);
        for (int r = 1; r <= 32; ++r)
            for (int t = 0; t < 32; ++t) {
                const Complex w = std::polar(0.95 * r / 32.0, 2.0 * std::numbers::pi * t / 32.0);
                modulus = std::max(modulus, std::abs(big.evaluate(w).value) - std::abs(w));
            }
    }
    const bool ok = b0 <= 1e-10 && modulus <= 1e-6 && nct <= 1e-9 && closed <= 1e-12;
    char buf[256];
    std::snprintf(buf, sizeof buf, "|b(0)| %.3g, max |b(w)|-|w| %.3g, V(e_-1) vs b/w %.3g, closed forms %.3g", b0, modulus,
                  nct, closed);
    return {ok, buf};
}

Outcome c6() {
    const Measure ms[] = {load_measure(config("delta0.json")), load_measure(config("half_atomic.json")),
                          load_measure(config("cantor.json"))};
    double worst = 0.0;
    for (const auto& m : ms)
        for (int t = 0; t < 20; ++t) worst = std::max(worst, backward_shift_deviation(m, random_trig_poly(1, 5, 6, 2024, t), 64));
    return {worst <= 1e-9, fmt("max coefficient deviation %.3g (tol 1e-9)", worst)};
}

Outcome c7() {
    const auto fs = basis2();
    const EqualityReport cc = nct_equality_test(load_measure(config("cantor2.json")), fs, {4, 4}, prefix_exact(12));
    const EqualityReport four = nct_equality_test(load_measure(config("four_atom_product.json")), fs, {4, 4});
    const EqualityReport sym = nct_equality_test(load_measure(config("symmetric_nonproduct.json")), fs, {4, 4}, prefix_exact(12));
    const bool ok = cc.equal && cc.deviation <= 1e-8 && four.equal && four.deviation <= 1e-8 && !sym.equal &&
                    sym.deviation >= 1e-3;
    return {ok, fmt("cantor2 %.3g, four-atom %.3g (equal, tol 1e-8); symmetric non-product %.3g (unequal, >= 1e-3)", cc.deviation,
                    four.deviation, sym.deviation)};
}

Outcome c8() {
    const auto fs = basis2();
    const double cc = symmetry_reflection_test(load_measure(config("cantor2.json")), fs, {6, 6});
    const double four = symmetry_reflection_test(load_measure(config("four_atom_product.json")), fs, {3, 3});
    const double sym = symmetry_reflection_test(load_measure(config("symmetric_nonproduct.json")), fs, {6, 6});
    return {cc <= 1e-8 && four <= 1e-8 && sym <= 1e-4,
            fmt("cantor2 %.3g, four-atom %.3g (tol 1e-8); symmetric non-product %.3g (tol 1e-4)", cc, four, sym)};
}

Outcome c9() {
    const Measure menger = load_measure(config("menger.json"));
    const ClassificationReport r = classify(std::get<DigitIFS>(menger));
    bool exact = r.coordinates.size() == 3;
    for (const auto& c : r.coordinates) {
        exact = exact && c.reduced.size() == 3 && c.reduced[0].second == 0.4 && c.reduced[1].second == 0.2 &&
                c.reduced[2].second == 0.4 && c.verdict == Verdict::Singular;
    }
    const Measure leb = load_measure(config("lebesgue2.json"));
    const bool leb_false = !classify(std::get<DigitIFS>(leb)).overall;
    return {exact && r.overall && leb_false,
            std::string("menger rows (0.4, 0.2, 0.4): ") + (exact ? "exact" : "mismatch") + ", overall " +
                (r.overall ? "true" : "false") + "; lebesgue2 overall " + (leb_false ? "false" : "true")};
}

Outcome c10() {
    const auto rows = boundary_limit_test(load_measure(config("four_atom_product.json")), TrigPoly::exponential({1, 1}),
                                          {0.5, 0.9, 0.99}, {1, 1});
    bool dec = true;
    for (std::size_t i = 1; i < rows.size(); ++i) dec = dec && rows[i].error < rows[i - 1].error;
    const double first = rows.front().error, last = rows.back().error;
    return {dec && last <= 0.05 * first, fmt("errors from %.4g down to %.4g; last/first %.4g (tol 0.05)", first, last, last / first)};
}

Outcome c11() {
    const Measure menger = load_measure(config("menger.json"));
    const TrigPoly f = TrigPoly::exponential({1, 0, 1}) + TrigPoly::exponential({0, 1, -1}, Complex(0.5, -0.25)) +
                       TrigPoly::exponential({2, -1, 0}, 0.3);
    const CoeffTensor a = nct_d(menger, f, {6, 6, 6}, prefix_exact(10)).coeffs;
    const CoeffTensor b = analyze_staged(menger, f, {6, 6, 6}, prefix_exact(10));
    const double dev = max_diff(a, b);
    const double excess = a.energy() - a.norm_sq * (1.0 + 1e-8);
    return {dev <= 1e-6 && excess <= 0.0, fmt("direct vs staged %.3g (tol 1e-6); energy %.6g <= |f|^2 %.6g", dev, a.energy(), a.norm_sq)};
}

Outcome c12() {
    const char* names[] = {"cantor2.json", "symmetric_nonproduct.json", "four_atom_product.json", "menger.json"};
    bool same = true;
    int runs = 0;
    for (const char* name : names) {
        const Measure m = load_measure(config(name));
        for (const QuadratureSpec& q : {prefix_exact(8), monte_carlo(20000, 7)}) {
            if (dimension(m) > 2 && q.mode == QuadratureMode::MonteCarlo) continue;
            std::string first;
            for (int threads : {1, 4, 8, 1}) {
                VerifyOptions o;
                o.seed = 7;
                o.threads = threads;
                o.quadrature = q;
                const std::string out = verify_suite(m, "all", o).dump(2);
                if (first.empty()) first = out;
                same = same && out == first;
                ++runs;
            }
        }
    }
    return {same, fmt("%.0f verify runs over 1/4/8 threads, artifacts ", runs) + (same ? "identical" : "differ")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "kaczmarz consistency", 1.0, c1},
        {2, "exact atomic oracle", 1.0, c2},
        {3, "parseval/bessel", 30.0, c3},
        {4, "iterated-order convergence", 60.0, c4},
        {5, "inner-function identities", 5.0, c5},
        {6, "backward-shift identity", 5.0, c6},
        {7, "transform equality dichotomy", 60.0, c7},
        {8, "symmetry reflection", 60.0, c8},
        {9, "menger classification", 1.0, c9},
        {10, "boundary behavior", 1.0, c10},
        {11, "d=3 composition", 300.0, c11},
        {12, "determinism", 600.0, c12},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && dt <= c.budget_s;
        failed += !pass;
        std::printf("[%s] %2d %-30s %s; %.2f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), dt,
                    c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
