#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include "slicefourier/measure.hpp"
#include "slicefourier/trig_poly.hpp"

namespace oracle {

using slicefourier::Complex;
using CMatrix = std::vector<std::vector<Complex>>;

inline Complex e(double t) { return std::polar(1.0, 2.0 * std::numbers::pi * t); }

inline slicefourier::DigitIFS cantor() { return {3, {{0}, {2}}, {0.5, 0.5}}; }
inline slicefourier::DigitIFS cantor2() { return {3, {{0, 0}, {0, 2}, {2, 0}, {2, 2}}, {0.25, 0.25, 0.25, 0.25}}; }
inline slicefourier::DigitIFS sym_nonproduct() { return {3, {{0, 0}, {2, 2}, {0, 2}, {2, 0}}, {0.4, 0.4, 0.1, 0.1}}; }
inline slicefourier::DigitIFS lebesgue2() { return {2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0.25, 0.25, 0.25, 0.25}}; }
inline slicefourier::DigitIFS menger() {
    std::vector<slicefourier::DigitVector> d;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                if ((i == 1) + (j == 1) + (k == 1) < 2) d.push_back({i, j, k});
    return {3, d, std::vector<double>(d.size(), 0.05)};
}
inline slicefourier::AtomicMeasure delta0() { return slicefourier::AtomicMeasure({{{0.0}, 1.0}}); }
inline slicefourier::AtomicMeasure half_atomic() { return slicefourier::AtomicMeasure({{{0.0}, 0.5}, {{0.5}, 0.5}}); }
inline slicefourier::ProductMeasure four_atom() { return slicefourier::ProductMeasure({half_atomic(), half_atomic()}); }

// Truncated infinite product, one level at a time.
inline Complex product_moment(const slicefourier::DigitIFS& m, const std::vector<double>& xi, int levels = 80) {
    Complex p = 1.0;
    double scale = 1.0;
    for (int k = 1; k <= levels; ++k) {
        scale /= m.base();
        Complex s = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            double t = 0.0;
            for (std::size_t c = 0; c < xi.size(); ++c) t += xi[c] * m.digits()[i][c];
            s += m.weights()[i] * e(-t * scale);
        }
        p *= s;
    }
    return p;
}

// g_n = e_n - sum_{k<n} <e_n, e_k> g_k with <e_n, e_k> = mu^(k - n); row n holds the
// e_j coefficients of g_n.
inline CMatrix literal_aux(const std::function<Complex(int)>& mu, int N) {
    CMatrix g(N + 1, std::vector<Complex>(N + 1, 0.0));
    for (int n = 0; n <= N; ++n) {
        g[n][n] = 1.0;
        for (int k = 0; k < n; ++k) {
            const Complex ip = mu(k - n);
            for (int j = 0; j <= k; ++j) g[n][j] -= ip * g[k][j];
        }
    }
    return g;
}

// <e_nu, g_n> = sum_j conj(G[n][j]) mu^(j - nu)
inline Complex exp_against_aux(const CMatrix& g, const std::function<Complex(int)>& mu, int n, int nu) {
    Complex s = 0.0;
    for (int j = 0; j <= n; ++j) s += std::conj(g[n][j]) * mu(j - nu);
    return s;
}

inline std::function<Complex(int)> from_list(const std::map<int, Complex>& values) {
    return [values](int k) {
        auto it = values.find(std::abs(k));
        const Complex v = it == values.end() ? Complex(0.0) : it->second;
        return k < 0 ? std::conj(v) : v;
    };
}

inline std::function<Complex(int)> moments_of(const slicefourier::DigitIFS& m) {
    return [m](int k) { return product_moment(m, {static_cast<double>(k)}); };
}

// Brute-force 2-d coefficients of an atomic measure: iterate over atoms of the first
// coordinate, integrate the conditional slice explicitly.
inline std::vector<Complex> atomic_coeffs(const std::vector<slicefourier::Atom>& atoms, const slicefourier::TrigPoly& f,
                                          int N0, int N1) {
    std::map<double, double> marg;
    for (const auto& a : atoms) marg[a.point[0]] += a.weight;
    auto mu0 = [&](int k) {
        Complex s = 0.0;
        for (const auto& [x, p] : marg) s += p * e(-k * x);
        return s;
    };
    const CMatrix g0 = literal_aux(mu0, N0);
    std::vector<Complex> c((N0 + 1) * (N1 + 1), 0.0);
    for (const auto& [x0, p0] : marg) {
        auto slice = [&](int k) {
            Complex s = 0.0;
            for (const auto& a : atoms)
                if (a.point[0] == x0) s += a.weight / p0 * e(-k * a.point[1]);
            return s;
        };
        const CMatrix g1 = literal_aux(slice, N1);
        for (int n0 = 0; n0 <= N0; ++n0) {
            Complex g0x = 0.0;
            for (int j = 0; j <= n0; ++j) g0x += g0[n0][j] * e(j * x0);
            for (int n1 = 0; n1 <= N1; ++n1) {
                Complex h = 0.0;
                for (const auto& [nu, fv] : f.terms()) h += fv * e(nu[0] * x0) * exp_against_aux(g1, slice, n1, nu[1]);
                c[n0 * (N1 + 1) + n1] += p0 * h * std::conj(g0x);
            }
        }
    }
    return c;
}

// Brute-force 2-d coefficients of the depth-K model of a digit IFS: enumerate every
// first-coordinate prefix, build its slice law level by level, and integrate the first
// coordinate's tail through its marginal moments.
inline std::vector<Complex> prefix_coeffs(const slicefourier::DigitIFS& m, const slicefourier::TrigPoly& f, int N0,
                                          int N1, int K) {
    const int b = m.base();
    std::vector<double> p0(b, 0.0), p1(b, 0.0);
    std::vector<std::vector<double>> joint(b, std::vector<double>(b, 0.0));
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto& d = m.digits()[i];
        p0[d[0]] += m.weights()[i];
        p1[d[1]] += m.weights()[i];
        joint[d[0]][d[1]] += m.weights()[i];
    }
    auto law_moment = [&](const std::vector<double>& law, double xi, int levels_from) {
        Complex p = 1.0;
        double scale = std::pow(static_cast<double>(b), -levels_from);
        for (int k = 1; k <= 80; ++k) {
            scale /= b;
            Complex s = 0.0;
            for (int t = 0; t < b; ++t) s += law[t] * e(-xi * t * scale);
            p *= s;
        }
        return p;
    };
    auto mu0 = [&](int k) { return law_moment(p0, k, 0); };
    const CMatrix g0 = literal_aux(mu0, N0);
    std::vector<Complex> c((N0 + 1) * (N1 + 1), 0.0);
    std::vector<int> digits(K, 0);
    const double bK = std::pow(static_cast<double>(b), K);
    while (true) {
        double prob = 1.0, x = 0.0;
        for (int k = 0; k < K; ++k) {
            prob *= p0[digits[k]];
            x += digits[k] / std::pow(static_cast<double>(b), k + 1);
        }
        if (prob > 0.0) {
            auto slice = [&](int xi) {
                Complex s = law_moment(p1, xi, K);
                for (int k = 0; k < K; ++k) {
                    Complex lv = 0.0;
                    for (int t = 0; t < b; ++t)
                        lv += joint[digits[k]][t] / p0[digits[k]] * e(-xi * t / std::pow(static_cast<double>(b), k + 1));
                    s *= lv;
                }
                return s;
            };
            const CMatrix g1 = literal_aux(slice, N1);
            for (int n0 = 0; n0 <= N0; ++n0)
                for (int n1 = 0; n1 <= N1; ++n1) {
                    Complex acc = 0.0;
                    for (const auto& [nu, fv] : f.terms()) {
                        Complex outer = 0.0;
                        for (int j = 0; j <= n0; ++j)
                            outer += std::conj(g0[n0][j]) * e((nu[0] - j) * x) * law_moment(p0, (j - nu[0]) / bK, 0);
                        acc += fv * outer * exp_against_aux(g1, slice, n1, nu[1]);
                    }
                    c[n0 * (N1 + 1) + n1] += prob * acc;
                }
        }
        int k = K - 1;
        while (k >= 0 && ++digits[k] == b) digits[k--] = 0;
        if (k < 0) break;
    }
    return c;
}

}  // namespace oracle
