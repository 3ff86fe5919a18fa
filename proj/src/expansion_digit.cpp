#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "engines.hpp"
#include "slicefourier/error.hpp"
#include "slicefourier/kaczmarz.hpp"
#include "slicefourier/moments.hpp"
#include "slicefourier/parallel.hpp"

namespace slicefourier::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMinTasks = 64;

// exp(sign * 2 pi i * t)
Complex phase(double t, double sign) { return std::polar(1.0, sign * kTwoPi * (t - std::floor(t))); }

std::vector<double> inverse_powers(int base, int K) {
    std::vector<double> p(K + 1, 1.0);
    for (int k = 1; k <= K; ++k) p[k] = p[k - 1] / base;
    return p;
}

// sum_t law[t] exp(sign 2 pi i m t b^-k)
Complex law_factor(const std::vector<double>& law, int m, double inv_pow, double sign) {
    Complex s = 0.0;
    for (std::size_t t = 0; t < law.size(); ++t)
        if (law[t] != 0.0) s += law[t] * phase(static_cast<double>(m) * static_cast<double>(t) * inv_pow, sign);
    return s;
}

Complex marginal_tail(const DigitDisintegration& D, int c, double xi) {
    const FactorMeasure fm = D.marginal_ifs(c);
    return moment(fm, xi).value;
}

bool product_weights(const DigitDisintegration& D) {
    const auto& ifs = D.ifs();
    std::size_t count = 1;
    for (int c = 0; c < ifs.dim(); ++c) {
        std::size_t support = 0;
        for (double w : D.marginal_law(c)) support += w > 0.0;
        count *= support;
    }
    if (count != ifs.size()) return false;
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        double p = 1.0;
        for (int c = 0; c < ifs.dim(); ++c) p *= D.marginal_law(c)[ifs.digits()[i][c]];
        if (std::abs(p - ifs.weights()[i]) > 1e-13) return false;
    }
    return true;
}

void common_metadata(EngineResult& r, const DigitIFS& ifs, const DigitDisintegration& D, const TrigPoly& f,
                     const std::vector<int>& orders, int K) {
    Complex nn = 0.0;
    std::vector<double> diff(ifs.dim());
    for (const auto& [nu, a] : f.terms()) {
        for (const auto& [kappa, b] : f.terms()) {
            for (int c = 0; c < ifs.dim(); ++c) diff[c] = kappa[c] - nu[c];
            nn += a * std::conj(b) * model_moment(ifs, diff, K).value;
        }
    }
    r.norm_sq = nn.real();
    if (product_weights(D)) {
        r.error_estimate = 0.0;
        return;
    }
    std::vector<double> reach(ifs.dim());
    const Frequency lo = f.min_frequency(), hi = f.max_frequency();
    for (int c = 0; c < ifs.dim(); ++c) reach[c] = orders[c] + std::max(std::abs(lo[c]), std::abs(hi[c]));
    r.error_estimate = f.l1_norm() * model_moment_gap(ifs, reach, K);
}

void check_budget(double branches, int K, double budget) {
    const double leaves = std::pow(branches, K);
    if (leaves > budget)
        fail(ErrorCode::QuadratureBudgetExceeded,
             "prefix enumeration needs " + std::to_string(leaves) + " leaves (budget " + std::to_string(budget) + ")");
}

int split_depth(std::size_t branches, int K) {
    int s = 0;
    std::size_t tasks = 1;
    while (s < K && tasks < kMinTasks) {
        tasks *= branches;
        ++s;
    }
    return s;
}

std::vector<int> decode(std::size_t task, std::size_t branches, int s) {
    std::vector<int> seq(s);
    for (int i = s - 1; i >= 0; --i) {
        seq[i] = static_cast<int>(task % branches);
        task /= branches;
    }
    return seq;
}

// Slice moment factor tables for coordinate c >= 1: fac[k][r][m] for m = 0..N.
std::vector<std::vector<std::vector<Complex>>> slice_factor_table(const DigitDisintegration& D, int c, int N,
                                                                  const std::vector<double>& inv_pow) {
    const int K = static_cast<int>(inv_pow.size()) - 1;
    std::vector<std::vector<std::vector<Complex>>> fac(K + 1);
    for (int k = 1; k <= K; ++k) {
        fac[k].resize(D.class_count(c));
        for (int r = 0; r < D.class_count(c); ++r)
            for (int m = 0; m <= N; ++m) fac[k][r].push_back(law_factor(D.slice_law(c, r), m, inv_pow[k], -1.0));
    }
    return fac;
}

}  // namespace

EngineResult digit_direct(const DigitIFS& ifs, const TrigPoly& f, const std::vector<int>& orders,
                          const QuadratureSpec& q, int threads) {
    const DigitDisintegration D(ifs);
    const int d = ifs.dim();
    const int K = q.depth;
    if (K < 1) fail(ErrorCode::InvalidArgument, "prefix depth must be >= 1");
    const auto& joint = D.joint_classes();
    const std::size_t J = joint.size();
    check_budget(static_cast<double>(J), K, q.leaf_budget);
    const auto inv_pow = inverse_powers(ifs.base(), K);

    // box of m = nu - k
    const Frequency fmin = f.min_frequency(), fmax = f.max_frequency();
    std::vector<int> lo(d), ext(d);
    for (int c = 0; c < d; ++c) {
        lo[c] = fmin[c] - orders[c];
        ext[c] = fmax[c] - lo[c] + 1;
    }
    const Shape box(ext);
    std::vector<int> oext;
    for (int n : orders) oext.push_back(n + 1);
    const Shape out_shape(oext);

    // Lam[k][j][m] = E[exp(2 pi i m.delta b^-k) | joint class j]
    std::vector<std::vector<std::vector<Complex>>> lam(K + 1, std::vector<std::vector<Complex>>(J));
    for (int k = 1; k <= K; ++k) {
        // separable phases per coordinate and digit value
        std::vector<std::vector<std::vector<Complex>>> z(d, std::vector<std::vector<Complex>>(ifs.base()));
        for (int c = 0; c < d; ++c)
            for (int t = 0; t < ifs.base(); ++t)
                for (int i = 0; i < ext[c]; ++i)
                    z[c][t].push_back(phase(static_cast<double>(lo[c] + i) * t * inv_pow[k], 1.0));
        for (std::size_t j = 0; j < J; ++j) {
            auto& L = lam[k][j];
            L.assign(box.size, 0.0);
            for (std::size_t i = 0; i < box.size; ++i) {
                const auto idx = box.unflat(i);
                for (const auto& [digit, p] : joint[j].digits) {
                    Complex v = p;
                    for (int c = 0; c < d; ++c) v *= z[c][ifs.digits()[digit][c]][idx[c]];
                    L[i] += v;
                }
            }
        }
    }
    std::vector<Complex> tail_box(box.size, 1.0);
    for (std::size_t i = 0; i < box.size; ++i) {
        const auto idx = box.unflat(i);
        for (int c = 0; c < d; ++c)
            tail_box[i] *= std::conj(marginal_tail(D, c, (lo[c] + idx[c]) * inv_pow[K]));
    }
    std::vector<std::vector<std::vector<std::vector<Complex>>>> sfac(d);
    std::vector<std::vector<Complex>> stail(d);
    for (int c = 1; c < d; ++c) {
        sfac[c] = slice_factor_table(D, c, orders[c], inv_pow);
        for (int m = 0; m <= orders[c]; ++m) stail[c].push_back(marginal_tail(D, c, m * inv_pow[K]));
    }
    const auto gen0 = kaczmarz_generator(moment_sequence(Measure(D.marginal_ifs(0)), orders[0]).values(), orders[0]);

    const int s = split_depth(J, K);
    std::size_t tasks = 1;
    for (int i = 0; i < s; ++i) tasks *= J;
    std::vector<std::vector<Complex>> partial(tasks);

    parallel_for(tasks, threads, [&](std::size_t task) {
        std::vector<Complex> acc(out_shape.size, 0.0);
        std::vector<std::vector<Complex>> path(K + 1, std::vector<Complex>(box.size));
        std::vector<std::vector<std::vector<Complex>>> spath(d, std::vector<std::vector<Complex>>(K + 1));
        std::vector<double> prob(K + 1, 1.0);
        std::fill(path[0].begin(), path[0].end(), Complex(1.0));
        for (int c = 1; c < d; ++c) spath[c][0].assign(orders[c] + 1, 1.0);
        std::vector<Complex> Y(out_shape.size);

        auto push = [&](int k, int j) {
            const auto& L = lam[k][j];
            for (std::size_t i = 0; i < box.size; ++i) path[k][i] = path[k - 1][i] * L[i];
            prob[k] = prob[k - 1] * joint[j].prob;
            for (int c = 1; c < d; ++c) {
                const auto& fac = sfac[c][k][joint[j].chain[c - 1]];
                spath[c][k].resize(orders[c] + 1);
                for (int m = 0; m <= orders[c]; ++m) spath[c][k][m] = spath[c][k - 1][m] * fac[m];
            }
        };
        auto leaf = [&] {
            std::fill(Y.begin(), Y.end(), Complex(0.0));
            std::vector<int> bidx(d);
            for (std::size_t i = 0; i < out_shape.size; ++i) {
                const auto kidx = out_shape.unflat(i);
                Complex v = 0.0;
                for (const auto& [nu, fv] : f.terms()) {
                    for (int c = 0; c < d; ++c) bidx[c] = nu[c] - kidx[c] - lo[c];
                    const std::size_t b = box.flat(bidx);
                    v += fv * path[K][b] * tail_box[b];
                }
                Y[i] = v;
            }
            dual_transform_axis(Y, out_shape, 0, gen0);
            for (int c = 1; c < d; ++c) {
                std::vector<Complex> mom(orders[c] + 1);
                for (int m = 0; m <= orders[c]; ++m) mom[m] = spath[c][K][m] * stail[c][m];
                dual_transform_axis(Y, out_shape, c, kaczmarz_generator(mom, orders[c]));
            }
            for (std::size_t i = 0; i < out_shape.size; ++i) acc[i] += prob[K] * Y[i];
        };
        const auto prefix = decode(task, J, s);
        for (int k = 1; k <= s; ++k) push(k, prefix[k - 1]);
        // iterative DFS over levels s+1..K
        std::vector<int> choice(K + 2, -1);
        int k = s + 1;
        if (s == K) {
            leaf();
        } else {
            while (k > s) {
                if (++choice[k] == static_cast<int>(J)) {
                    choice[k] = -1;
                    --k;
                    continue;
                }
                push(k, choice[k]);
                if (k == K)
                    leaf();
                else
                    ++k;
            }
        }
        partial[task] = std::move(acc);
    });

    EngineResult r;
    r.coeffs.assign(out_shape.size, 0.0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < p.size(); ++i) r.coeffs[i] += p[i];
    common_metadata(r, ifs, D, f, orders, K);
    return r;
}

EngineResult digit_staged(const DigitIFS& ifs, const TrigPoly& f, const std::vector<int>& orders,
                          const QuadratureSpec& q, int threads) {
    const DigitDisintegration D(ifs);
    const int d = ifs.dim();
    const int K = q.depth;
    if (K < 1) fail(ErrorCode::InvalidArgument, "prefix depth must be >= 1");
    const auto inv_pow = inverse_powers(ifs.base(), K);
    using Key = std::vector<int>;
    using Buckets = std::map<Key, std::vector<Complex>>;

    EngineResult r;
    r.stage_norms.assign(d, {});

    // stage d input: f on its own support, one bucket
    std::vector<Frequency> in_support = projected_support(f, d);
    Buckets in;
    {
        std::vector<Complex> v;
        for (const auto& nu : in_support) v.push_back(f.coefficient(nu));
        in.emplace(Key(K, 0), std::move(v));
    }
    std::size_t tail_extent = 1;  // size of (n_{c+1}..n_{d-1})

    for (int c = d - 1; c >= 0; --c) {
        struct Choice {
            int from, to;
            double prob;
            std::vector<double> law;
        };
        std::vector<Choice> choices;
        for (int rr = 0; rr < D.class_count(c); ++rr) {
            if (c == d - 1)
                choices.push_back({rr, 0, 1.0, D.slice_law(c, rr)});
            else
                for (const auto& tr : D.transitions(c, rr)) choices.push_back({rr, tr.to, tr.prob, tr.digit_law});
        }
        const std::size_t C = choices.size();
        check_budget(static_cast<double>(C), K, q.leaf_budget);

        const std::vector<Frequency> out_support = projected_support(f, c);
        std::vector<int> parent(in_support.size()), mu_c(in_support.size());
        int mmin = 0, mmax = 0;
        for (std::size_t i = 0; i < in_support.size(); ++i) {
            const Frequency p(in_support[i].begin(), in_support[i].begin() + c);
            parent[i] = static_cast<int>(std::lower_bound(out_support.begin(), out_support.end(), p) - out_support.begin());
            mu_c[i] = in_support[i][c];
            if (i == 0 || mu_c[i] < mmin) mmin = mu_c[i];
            if (i == 0 || mu_c[i] > mmax) mmax = mu_c[i];
        }
        const int N = orders[c];
        const int mlo = mmin - N;
        const int mext = mmax - mlo + 1;

        // psi_fac[k][choice][m - mlo], gam_fac[k][class][m]
        std::vector<std::vector<std::vector<Complex>>> psi_fac(K + 1, std::vector<std::vector<Complex>>(C));
        for (int k = 1; k <= K; ++k)
            for (std::size_t ch = 0; ch < C; ++ch)
                for (int i = 0; i < mext; ++i)
                    psi_fac[k][ch].push_back(law_factor(choices[ch].law, mlo + i, inv_pow[k], 1.0));
        std::vector<std::vector<std::vector<Complex>>> gam_fac;
        if (c > 0) gam_fac = slice_factor_table(D, c, N, inv_pow);
        std::vector<Complex> psi_tail(mext), gam_tail(N + 1);
        for (int i = 0; i < mext; ++i) psi_tail[i] = std::conj(marginal_tail(D, c, (mlo + i) * inv_pow[K]));
        for (int m = 0; m <= N; ++m) gam_tail[m] = marginal_tail(D, c, m * inv_pow[K]);
        const std::vector<Complex> gen_root =
            c == 0 ? kaczmarz_generator(moment_sequence(Measure(D.marginal_ifs(0)), N).values(), N)
                   : std::vector<Complex>{};

        const std::size_t out_extent = out_support.size() * (N + 1) * tail_extent;
        const int s = split_depth(C, K);
        std::size_t tasks = 1;
        for (int i = 0; i < s; ++i) tasks *= C;
        std::vector<Buckets> partial(tasks);

        parallel_for(tasks, threads, [&](std::size_t task) {
            Buckets local;
            std::vector<std::vector<Complex>> psi(K + 1, std::vector<Complex>(mext, 1.0));
            std::vector<std::vector<Complex>> gam(K + 1, std::vector<Complex>(N + 1, 1.0));
            std::vector<double> prob(K + 1, 1.0);
            Key from(K), to(K);
            std::vector<Complex> Y(out_support.size() * (N + 1) * tail_extent);

            auto push = [&](int k, int ch) {
                const auto& cc = choices[ch];
                from[k - 1] = cc.from;
                to[k - 1] = cc.to;
                prob[k] = prob[k - 1] * cc.prob;
                for (int i = 0; i < mext; ++i) psi[k][i] = psi[k - 1][i] * psi_fac[k][ch][i];
                if (c > 0)
                    for (int m = 0; m <= N; ++m) gam[k][m] = gam[k - 1][m] * gam_fac[k][cc.from][m];
            };
            auto leaf = [&] {
                const auto& src = in.at(to);
                std::vector<Complex> gen;
                if (c > 0) {
                    std::vector<Complex> mom(N + 1);
                    for (int m = 0; m <= N; ++m) mom[m] = gam[K][m] * gam_tail[m];
                    gen = kaczmarz_generator(mom, N);
                }
                const auto& a = c > 0 ? gen : gen_root;
                std::fill(Y.begin(), Y.end(), Complex(0.0));
                for (std::size_t i = 0; i < in_support.size(); ++i) {
                    const std::size_t pbase = static_cast<std::size_t>(parent[i]) * (N + 1) * tail_extent;
                    for (int k = 0; k <= N; ++k) {
                        const int mi = mu_c[i] - k - mlo;
                        const Complex w = psi[K][mi] * psi_tail[mi];
                        Complex* y = &Y[pbase + k * tail_extent];
                        const Complex* x = &src[i * tail_extent];
                        for (std::size_t j = 0; j < tail_extent; ++j) y[j] += w * x[j];
                    }
                }
                auto [it, inserted] = local.try_emplace(from);
                if (inserted) it->second.assign(out_extent, 0.0);
                auto& out = it->second;
                for (std::size_t p = 0; p < out_support.size(); ++p) {
                    const std::size_t pbase = p * (N + 1) * tail_extent;
                    for (int n = 0; n <= N; ++n) {
                        for (int k = 0; k <= n; ++k) {
                            const Complex w = prob[K] * std::conj(a[n - k]);
                            const Complex* y = &Y[pbase + k * tail_extent];
                            Complex* o = &out[pbase + n * tail_extent];
                            for (std::size_t j = 0; j < tail_extent; ++j) o[j] += w * y[j];
                        }
                    }
                }
            };
            const auto prefix = decode(task, C, s);
            for (int k = 1; k <= s; ++k) push(k, prefix[k - 1]);
            if (s == K) {
                leaf();
            } else {
                std::vector<int> choice(K + 2, -1);
                int k = s + 1;
                while (k > s) {
                    if (++choice[k] == static_cast<int>(C)) {
                        choice[k] = -1;
                        --k;
                        continue;
                    }
                    push(k, choice[k]);
                    if (k == K)
                        leaf();
                    else
                        ++k;
                }
            }
            partial[task] = std::move(local);
        });

        Buckets out;
        for (auto& p : partial) {
            for (auto& [key, v] : p) {
                auto [it, inserted] = out.try_emplace(key);
                if (inserted) {
                    it->second = std::move(v);
                } else {
                    for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += v[i];
                }
            }
        }
        tail_extent *= static_cast<std::size_t>(N + 1);

        if (c > 0) {
            // |H_c|^2 over (n_c..n_{d-1}); x_0..x_{c-1} given the class sequence has independent
            // level digits drawn from the class members, then marginal tails.
            auto& norms = r.stage_norms[c];
            norms.assign(tail_extent, 0.0);
            const std::size_t P = out_support.size();
            std::vector<double> xi(c);
            for (const auto& [key, Q] : out) {
                double pk = 1.0;
                for (int k = 0; k < K; ++k) pk *= D.class_probability(c, key[k]);
                std::vector<Complex> xi_val(P * P);
                for (std::size_t a = 0; a < P; ++a) {
                    for (std::size_t b = 0; b < P; ++b) {
                        Complex v = 1.0;
                        for (int k = 1; k <= K; ++k) {
                            Complex lv = 0.0;
                            for (const auto& mem : D.members(c, key[k - 1])) {
                                double t = 0.0;
                                for (int j = 0; j < c; ++j)
                                    t += static_cast<double>(out_support[a][j] - out_support[b][j]) * mem.digit[j];
                                lv += mem.prob * phase(t * inv_pow[k], 1.0);
                            }
                            v *= lv;
                        }
                        for (int j = 0; j < c; ++j)
                            v *= std::conj(marginal_tail(D, j, (out_support[a][j] - out_support[b][j]) * inv_pow[K]));
                        xi_val[a * P + b] = v;
                    }
                }
                for (std::size_t t = 0; t < tail_extent; ++t) {
                    Complex s2 = 0.0;
                    for (std::size_t a = 0; a < P; ++a)
                        for (std::size_t b = 0; b < P; ++b)
                            s2 += Q[a * tail_extent + t] * std::conj(Q[b * tail_extent + t]) * xi_val[a * P + b];
                    norms[t] += pk * s2.real();
                }
            }
        }
        in = std::move(out);
        in_support = out_support;
    }
    r.coeffs = in.begin()->second;
    common_metadata(r, ifs, D, f, orders, K);
    return r;
}

}  // namespace slicefourier::detail
