#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slicefourier/moments.hpp"
#include "slicefourier/transforms.hpp"
#include "slicefourier/verify.hpp"
#include "support.hpp"

using namespace slicefourier;

namespace {

std::vector<Measure> singular_1d() { return {oracle::delta0(), oracle::half_atomic(), oracle::cantor()}; }

std::vector<TrigPoly> basis2(int hi) {
    std::vector<TrigPoly> fs;
    for (int a = -1; a <= hi; ++a)
        for (int b = -1; b <= hi; ++b) fs.push_back(TrigPoly::exponential({a, b}));
    return fs;
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("cauchy transform closed forms") {
    const TrigPoly one = TrigPoly::constant(1);
    CHECK(std::abs(cauchy_transform(oracle::cantor(), one, 0.0).value - 1.0) <= 1e-15);
    for (const Complex w : {Complex(0.3, 0.1), Complex(-0.7, 0.2), Complex(0.0, 0.95)}) {
        CHECK(std::abs(cauchy_transform(oracle::delta0(), one, w).value - 1.0 / (1.0 - w)) <= 1e-12);
        CHECK(std::abs(cauchy_transform(oracle::half_atomic(), one, w).value - 1.0 / (1.0 - w * w)) <= 1e-12);
    }
    CHECK_CODE(cauchy_transform(oracle::cantor(), one, 0.9995), ErrorCode::PointOutsideDisk);
}

TEST_CASE("cauchy transform of the cantor measure against a direct series") {
    const TrigPoly f = TrigPoly::exponential({2}) + TrigPoly::exponential({-1}, Complex(0.0, 0.5));
    const Complex w(0.4, -0.3);
    const auto mu = oracle::moments_of(oracle::cantor());
    Complex want = 0.0, wn = 1.0;
    for (int n = 0; n < 90; ++n) {
        want += (mu(n - 2) + Complex(0.0, 0.5) * mu(n + 1)) * wn;
        wn *= w;
    }
    const SeriesValue v = cauchy_transform(oracle::cantor(), f, w);
    CHECK(std::abs(v.value - want) <= 1e-12);
    CHECK(v.tail_bound <= 1e-12);
}

TEST_CASE("inner functions") {
    const InnerFunctionSeries d = inner_function(oracle::delta0(), 64);
    const InnerFunctionSeries h = inner_function(oracle::half_atomic(), 64);
    for (int n = 0; n <= 64; ++n) {
        CHECK(std::abs(d.coefficients()[n] - (n == 1 ? 1.0 : 0.0)) <= 1e-12);
        CHECK(std::abs(h.coefficients()[n] - (n == 2 ? 1.0 : 0.0)) <= 1e-12);
    }
    const InnerFunctionSeries c = inner_function(oracle::cantor(), 64);
    CHECK(std::abs(c.coefficients()[1] - 0.37143735670876564) <= 1e-14);
    CHECK(std::abs(c.coefficients()[2] + 0.21450742268746316) <= 1e-14);
    for (const auto& m : singular_1d()) {
        const InnerFunctionSeries b = inner_function(m, 64);
        CHECK(std::abs(b.coefficients()[0]) <= 1e-10);
        CHECK(b.herglotz_defect() <= 1e-10);
        CHECK(inner_nct_deviation(m, 64) <= 1e-9);
        const InnerFunctionSeries big = inner_function(m, 512);
        for (int i = 1; i <= 32; ++i)
            for (int j = 0; j < 32; ++j) {
                const Complex w = std::polar(0.95 * i / 32.0, 2.0 * std::numbers::pi * j / 32.0);
                const SeriesValue v = big.evaluate(w);
                CHECK(std::abs(v.value) <= std::abs(w) + 1e-6);
                CHECK(v.tail_bound <= 1e-6);
            }
    }
}

TEST_CASE("inner function reproduces the cauchy transform") {
    const InnerFunctionSeries b = inner_function(oracle::cantor(), 400);
    const Complex w(0.2, 0.5);
    const Complex c = cauchy_transform(oracle::cantor(), TrigPoly::constant(1), w).value;
    CHECK(std::abs(b.evaluate(w).value - (1.0 - 1.0 / c)) <= 1e-12);
}

TEST_CASE("reciprocal needs a nonzero constant term") {
    const std::vector<Complex> c = {0.0, 1.0};
    CHECK_CODE(series_reciprocal(c, 1), ErrorCode::SingularReciprocal);
    const std::vector<Complex> g = {1.0, -1.0, 0.0, 0.0};
    const auto r = series_reciprocal(g, 3);
    for (const auto& v : r) CHECK(std::abs(v - 1.0) <= 1e-15);
}

TEST_CASE("one-variable transform examples") {
    for (const auto& m : singular_1d()) {
        const PowerSeriesGrid one = nct_1d(m, TrigPoly::constant(1), 16);
        CHECK(std::abs(one.coeffs.values[0] - 1.0) <= 1e-14);
        for (int n = 1; n <= 16; ++n) CHECK(std::abs(one.coeffs.values[n]) <= 1e-14);
    }
    const TrigPoly f = random_trig_poly(1, 4, 5, 8);
    const PowerSeriesGrid d = nct_1d(oracle::delta0(), f, 10);
    CHECK(std::abs(d.coeffs.values[0] - f(std::vector<double>{0.0})) <= 1e-14);
    for (int n = 1; n <= 10; ++n) CHECK(std::abs(d.coeffs.values[n]) <= 1e-14);
    const PowerSeriesGrid h = nct_1d(oracle::half_atomic(), TrigPoly::exponential({1}), 10);
    for (int n = 0; n <= 10; ++n) CHECK(std::abs(h.coeffs.values[n] - (n == 1 ? 1.0 : 0.0)) <= 1e-14);
    const Complex z[1] = {Complex(0.3, 0.4)};
    CHECK(std::abs(h.evaluate(z) - z[0]) <= 1e-14);
}

TEST_CASE("backward shift identity for seeded polynomials") {
    for (const auto& m : singular_1d())
        for (int t = 0; t < 20; ++t) CHECK(backward_shift_deviation(m, random_trig_poly(1, 5, 6, 99, t), 40) <= 1e-9);
}

TEST_CASE("two-variable transform examples") {
    const PowerSeriesGrid one = nct_d(oracle::cantor2(), TrigPoly::constant(2), {5, 5});
    CHECK(std::abs(one.coeffs.values[0] - 1.0) <= 1e-12);
    for (std::size_t j = 1; j < one.coeffs.values.size(); ++j) CHECK(std::abs(one.coeffs.values[j]) <= 1e-12);

    // separable f on a product: outer product of one-variable transforms
    const TrigPoly f = TrigPoly::exponential({1, 0}, 0.5) + TrigPoly::exponential({1, 1}, Complex(0.0, 2.0));
    const TrigPoly p = TrigPoly::exponential({1}), q = TrigPoly::exponential({0}, 0.5) + TrigPoly::exponential({1}, Complex(0.0, 2.0));
    const PowerSeriesGrid v = nct_d(oracle::four_atom(), f, {3, 3});
    const PowerSeriesGrid a = nct_1d(oracle::half_atomic(), p, 3);
    const PowerSeriesGrid b = nct_1d(oracle::half_atomic(), q, 3);
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j)
            CHECK(std::abs(v.coeffs.values[i * 4 + j] - a.coeffs.values[i] * b.coeffs.values[j]) <= 1e-14);

    CHECK(nct_d(oracle::sym_nonproduct(), TrigPoly(2), {3, 3}).l2_norm_sq() == 0.0);
    CHECK(nct_composition_deviation(oracle::sym_nonproduct(), random_trig_poly(2, 4, 3, 3), {4, 4}, prefix_exact(8)) <= 1e-12);
}

TEST_CASE("model space residuals") {
    const Measure delta_slices = ProductMeasure({oracle::cantor(), oracle::delta0()});
    const TrigPoly f = random_trig_poly(2, 4, 3, 12);
    CHECK(model_space_residual(delta_slices, f, 4, 8).max_residual <= 1e-12);
    const Measure half_slices = ProductMeasure({oracle::cantor(), oracle::half_atomic()});
    CHECK(model_space_residual(half_slices, TrigPoly::exponential({0, 1}), 4, 8).max_residual <= 1e-12);
    CHECK(model_space_residual(oracle::cantor2(), TrigPoly(2), 4, 8).max_residual == 0.0);
    const Measure skew = AtomicMeasure({{{0.0, 0.0}, 0.5}, {{0.5, 0.25}, 0.25}, {{0.5, 0.75}, 0.25}});
    CHECK(model_space_residual(skew, f, 4, 8).max_residual <= 1e-6);
    // cantor slices: the truncated pairing only decays slowly with the series order
    const double r16 = model_space_residual(oracle::cantor2(), TrigPoly::exponential({1, 1}), 4, 16, 4).max_residual;
    const double r256 = model_space_residual(oracle::cantor2(), TrigPoly::exponential({1, 1}), 4, 256, 4).max_residual;
    CHECK(r256 < r16);
}

TEST_CASE("equality of the two disintegration orders") {
    const EqualityReport cc = nct_equality_test(oracle::cantor2(), basis2(1), {4, 4});
    CHECK(cc.equal);
    CHECK(cc.deviation <= 1e-8);
    const EqualityReport four = nct_equality_test(oracle::four_atom(), basis2(1), {3, 3});
    CHECK(four.equal);
    CHECK(four.deviation == 0.0);
    const EqualityReport sym = nct_equality_test(oracle::sym_nonproduct(), basis2(1), {4, 4});
    CHECK_FALSE(sym.equal);
    CHECK(sym.deviation >= 1e-3);
}

TEST_CASE("symmetric reflection") {
    CHECK(swap_symmetric(oracle::sym_nonproduct()));
    CHECK_FALSE(swap_symmetric(AtomicMeasure({{{0.0, 0.5}, 1.0}})));
    CHECK(symmetry_reflection_test(oracle::cantor2(), {TrigPoly::exponential({1, 0})}, {6, 6}) <= 1e-8);
    CHECK(symmetry_reflection_test(oracle::sym_nonproduct(), basis2(2), {5, 5}) <= 1e-4);
    CHECK(symmetry_reflection_test(oracle::four_atom(), {TrigPoly(2)}, {2, 2}) == 0.0);
    CHECK_CODE(symmetry_reflection_test(AtomicMeasure({{{0.0, 0.5}, 1.0}}), basis2(0), {2, 2}), ErrorCode::NotSymmetric);
}

TEST_CASE("boundary limits") {
    const Measure dd = ProductMeasure({oracle::delta0(), oracle::delta0()});
    for (const auto& row : boundary_limit_test(dd, random_trig_poly(2, 3, 2, 4), {0.5, 0.9, 0.99}, {2, 2}))
        CHECK(row.error <= 1e-12);
    // V(e_(1,1)) = z1 z2 on the four-atom product, so the error is 1 - r1 r2
    const auto rows = boundary_limit_test(oracle::four_atom(), TrigPoly::exponential({1, 1}), {0.5, 0.9, 0.99}, {1, 1});
    const double want[][3] = {{0.5, 0.5, 0.75}, {0.9, 0.5, 0.55}, {0.99, 0.5, 0.505}, {0.99, 0.9, 0.109}, {0.99, 0.99, 0.0199}};
    REQUIRE(rows.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(rows[i].r1 == want[i][0]);
        CHECK(rows[i].r2 == want[i][1]);
        CHECK(std::abs(rows[i].error - want[i][2]) <= 1e-12);
    }
    const auto cantor = boundary_limit_test(oracle::cantor2(), TrigPoly::exponential({1, 1}), {0.3, 0.5, 0.7}, {40, 40});
    for (std::size_t i = 1; i < cantor.size(); ++i) CHECK(cantor[i].error < cantor[i - 1].error);
    CHECK_CODE(boundary_limit_test(oracle::cantor2(), TrigPoly::exponential({1, 0}), {0.5, 0.99}, {4, 4}),
               ErrorCode::RadiusTooCloseToOne);
    CHECK_CODE(boundary_limit_test(oracle::four_atom(), TrigPoly::exponential({1, 0}), {0.5, 1.2}, {1, 1}),
               ErrorCode::InvalidArgument);
}

}  // TEST_SUITE
