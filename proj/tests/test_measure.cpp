#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slicefourier/chaos.hpp"
#include "slicefourier/disintegration.hpp"
#include "slicefourier/measure.hpp"
#include "slicefourier/moments.hpp"
#include "support.hpp"

using namespace slicefourier;

TEST_SUITE("measure") {

TEST_CASE("digit ifs validation") {
    CHECK_CODE(DigitIFS(3, {{0}, {2}}, {0.5, 0.6}), ErrorCode::InvalidArgument);
    CHECK_CODE(DigitIFS(1, {{0}}, {1.0}), ErrorCode::InvalidArgument);
    CHECK_CODE(DigitIFS(3, {{0}, {0, 1}}, {0.5, 0.5}), ErrorCode::InvalidArgument);
    const DigitIFS merged(3, {{0}, {2}, {0}}, {0.25, 0.5, 0.25});
    CHECK(merged.size() == 2);
    CHECK(merged.weights()[0] == doctest::Approx(0.5));
}

TEST_CASE("atomic and product validation") {
    CHECK_CODE(AtomicMeasure({{{1.5}, 1.0}}), ErrorCode::InvalidArgument);
    CHECK_CODE(AtomicMeasure({{{0.1}, 0.7}}), ErrorCode::InvalidArgument);
    const AtomicMeasure a({{{0.25}, 0.5}, {{0.25}, 0.5}});
    CHECK(a.atoms().size() == 1);
    CHECK_CODE(ProductMeasure({oracle::cantor2()}), ErrorCode::InvalidArgument);
}

TEST_CASE("menger marginals merge rows to 0.4, 0.2, 0.4") {
    const Measure m = oracle::menger();
    for (int c = 0; c < 3; ++c) {
        const Measure mc = coordinate_marginal(m, c);
        const auto& ifs = std::get<DigitIFS>(mc);
        REQUIRE(ifs.size() == 3);
        CHECK(ifs.weights()[0] == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(ifs.weights()[1] == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(ifs.weights()[2] == doctest::Approx(0.4).epsilon(1e-15));
    }
}

TEST_CASE("frozen moments from a 40-digit evaluation of the infinite product") {
    struct Row {
        Measure m;
        Frequency xi;
        double re;
    };
    const Row rows[] = {
        {oracle::cantor(), {1}, 0.37143735670876564},
        {oracle::cantor(), {2}, -0.076541712728668361},
        {oracle::cantor(), {5}, -0.170657966430212},
        {oracle::cantor(), {-3}, 0.37143735670876564},
        {oracle::menger(), {1, 0, 0}, 0.15863111529748206},
        {oracle::menger(), {1, 1, 0}, -0.031349591450672877},
        {oracle::menger(), {1, 1, 1}, -0.049415538078207545},
        {oracle::menger(), {2, -1, 1}, 0.018206078686355289},
        {DigitIFS(3, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}, {2, 2}}, std::vector<double>(8, 0.125)),
         {1, 1}, -0.080754932274794026},
        {oracle::sym_nonproduct(), {1, 1}, -0.061345983948405561},
        {oracle::sym_nonproduct(), {1, -1}, 0.57033515144042422},
    };
    for (const auto& r : rows) {
        const MomentValue v = moment(r.m, r.xi);
        CHECK(std::abs(v.value.real() - r.re) <= 1e-14);
        CHECK(std::abs(v.value.imag()) <= 1e-14);
        CHECK(v.error <= 1e-14);
    }
}

TEST_CASE("moments match the level-by-level product") {
    const DigitIFS ms[] = {oracle::cantor2(), oracle::sym_nonproduct(), oracle::menger()};
    for (const auto& m : ms) {
        for (int t = 0; t < 12; ++t) {
            std::vector<double> xi(m.dim());
            for (int c = 0; c < m.dim(); ++c) xi[c] = ((t * 7 + c * 3) % 11) - 5;
            const Complex a = moment(Measure(m), xi).value;
            const Complex b = oracle::product_moment(m, xi);
            CHECK(std::abs(a - b) <= 1e-13);
        }
    }
}

TEST_CASE("moment properties") {
    const Measure ms[] = {oracle::cantor(), oracle::menger(), oracle::sym_nonproduct(), oracle::four_atom(),
                          AtomicMeasure({{{0.1, 0.7}, 0.3}, {{0.4, 0.2}, 0.7}})};
    for (const auto& m : ms) {
        const int d = dimension(m);
        CHECK(std::abs(moment(m, Frequency(d, 0)).value - 1.0) <= 1e-15);
        for (int t = 1; t < 10; ++t) {
            Frequency xi(d), neg(d);
            for (int c = 0; c < d; ++c) {
                xi[c] = (t * (c + 2)) % 7 - 3;
                neg[c] = -xi[c];
            }
            const Complex v = moment(m, xi).value;
            CHECK(std::abs(v) <= 1.0 + 1e-12);
            CHECK(std::abs(moment(m, neg).value - std::conj(v)) <= 1e-14);
        }
    }
}

TEST_CASE("atomic and product moments in closed form") {
    const Measure half = oracle::half_atomic();
    for (int n = -6; n <= 6; ++n)
        CHECK(std::abs(moment(half, Frequency{n}).value - (n % 2 == 0 ? 1.0 : 0.0)) <= 1e-15);
    const Measure four = oracle::four_atom();
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            const double want = (a % 2 == 0 && b % 2 == 0) ? 1.0 : 0.0;
            CHECK(std::abs(moment(four, Frequency{a, b}).value - want) <= 1e-15);
        }
    const Measure leb = oracle::lebesgue2();
    CHECK(std::abs(moment(leb, Frequency{0, 3}).value) <= 1e-14);
    CHECK(std::abs(moment(leb, Frequency{2, -1}).value) <= 1e-14);
}

TEST_CASE("truncation depth and its cap") {
    // smallest K with exp(2 pi l1 b^-K) - 1 <= eps
    const int K = truncation_depth(3, 1.0, 1e-15);
    CHECK(std::expm1(2.0 * std::numbers::pi * std::pow(3.0, -K)) <= 1e-15);
    CHECK(std::expm1(2.0 * std::numbers::pi * std::pow(3.0, -(K - 1))) > 1e-15);
    CHECK_CODE(truncation_depth(3, 1.0, 1e-15, 5), ErrorCode::NonconvergentTolerance);
    CHECK_CODE(moment(oracle::cantor(), 1.0, 1e-15, 3), ErrorCode::NonconvergentTolerance);
}

TEST_CASE("depth-K model equals the measure for product weights") {
    const DigitIFS cc = oracle::cantor2();
    const std::vector<double> xi = {2.0, -1.0};
    CHECK(std::abs(model_moment(cc, xi, 4).value - moment(Measure(cc), xi).value) <= 1e-15);
    const DigitIFS sym = oracle::sym_nonproduct();
    const std::vector<double> eta = {1.0, 1.0};
    for (int K : {2, 4, 8}) {
        const double gap = std::abs(model_moment(sym, eta, K).value - moment(Measure(sym), eta).value);
        CHECK(gap <= model_moment_gap(sym, eta, K) + 1e-15);
    }
}

TEST_CASE("counter rng is a pure function of seed, stream and counter") {
    CounterRng a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 5; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x == CounterRng::hash(7, 3, i));
        CHECK(x != c.next_u64());
    }
    CounterRng u(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK((v >= 0.0 && v < 1.0));
    }
}

TEST_CASE("chaos game moments agree with the exact moments") {
    const DigitIFS m = oracle::sym_nonproduct();
    const std::size_t count = 40000;
    const auto pts = chaos_sample(m, count, 30, 11);
    CHECK(chaos_sample(m, 5, 30, 11)[4] == pts[4]);
    for (const Frequency& xi : {Frequency{1, 0}, Frequency{1, 1}, Frequency{1, -1}, Frequency{0, 2}}) {
        Complex s = 0.0;
        for (const auto& p : pts) s += oracle::e(-(xi[0] * p[0] + xi[1] * p[1]));
        s /= static_cast<double>(count);
        CHECK(std::abs(s - moment(Measure(m), xi).value) <= 5.0 / std::sqrt(static_cast<double>(count)));
    }
}

TEST_CASE("slice laws of the symmetric non-product measure") {
    const DigitIFS m = oracle::sym_nonproduct();
    const std::vector<DigitVector> prefix = {{0}, {2}};
    const SliceLaw s = slice_law(m, prefix);
    REQUIRE(s.levels.size() == 2);
    CHECK(s.levels[0][0] == doctest::Approx(0.8));
    CHECK(s.levels[0][2] == doctest::Approx(0.2));
    CHECK(s.levels[1][0] == doctest::Approx(0.2));
    CHECK(s.levels[1][2] == doctest::Approx(0.8));
    // moment is the product of the level masks and the marginal tail
    const double xi = 2.0;
    Complex want = moment(FactorMeasure(DigitIFS(3, {{0}, {2}}, {0.5, 0.5})), xi / 9.0).value;
    want *= 0.8 + 0.2 * oracle::e(-xi * 2.0 / 3.0);
    want *= 0.2 + 0.8 * oracle::e(-xi * 2.0 / 9.0);
    CHECK(std::abs(s.moment(xi).value - want) <= 1e-14);
    const std::vector<DigitVector> bad = {{1}};
    CHECK_CODE(slice_law(m, bad), ErrorCode::PrefixOutsideSupport);
    CHECK_CODE(slice_law(oracle::cantor(), {}), ErrorCode::DimensionTooSmall);
}

TEST_CASE("digit disintegration of the menger sponge") {
    const DigitDisintegration D(oracle::menger());
    CHECK(D.class_count(0) == 1);
    CHECK(D.class_count(1) == 2);
    CHECK(D.class_count(2) == 2);
    CHECK(D.joint_classes().size() == 3);
    double total = 0.0;
    for (const auto& j : D.joint_classes()) total += j.prob;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    // x0 = 1 leaves x1 in {0, 2}; x0 in {0, 2} leaves the full row law
    const int mid = D.class_of(1, {1});
    const int side = D.class_of(1, {0});
    CHECK(mid != side);
    CHECK(D.class_of(1, {2}) == side);
    CHECK(D.slice_law(1, mid)[1] == doctest::Approx(0.0));
    CHECK(D.slice_law(1, side)[1] == doctest::Approx(0.25));
}

TEST_CASE("sampled slices carry the slice moments") {
    const Measure m = oracle::sym_nonproduct();
    const auto slices = sample_slices(m, 4, 6, 5, 8);
    REQUIRE(slices.size() == 4);
    for (const auto& s : slices) {
        CHECK(s.moments.order() == 8);
        CHECK(std::abs(s.moments(0) - 1.0) <= 1e-15);
    }
    const auto atoms = sample_slices(AtomicMeasure({{{0.0, 0.5}, 0.5}, {{0.5, 0.0}, 0.25}, {{0.5, 0.5}, 0.25}}), 5, 1, 0, 2);
    CHECK(atoms.size() == 2);
}

}  // TEST_SUITE
