#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "engines.hpp"
#include "slicefourier/chaos.hpp"
#include "slicefourier/error.hpp"
#include "slicefourier/kaczmarz.hpp"
#include "slicefourier/moments.hpp"
#include "slicefourier/parallel.hpp"

namespace slicefourier::detail {

namespace {

constexpr std::int64_t kChunk = 1024;

Complex phase(double t, double sign) {
    return std::polar(1.0, sign * 2.0 * std::numbers::pi * (t - std::floor(t)));
}

struct SamplePoint {
    std::vector<double> x;
    std::vector<std::vector<Complex>> gens;  // dual generators per coordinate
    std::vector<Complex> last_moments;       // slice moments of coordinate 1, m = 0..reach (d = 2 only)
};

// Draws sample i of the reference measure together with its slice data.
class Sampler {
public:
    virtual ~Sampler() = default;
    virtual SamplePoint draw(std::int64_t i) const = 0;
    double norm_sq = 0.0;
};

class DigitSampler : public Sampler {
public:
    DigitSampler(const DigitIFS& m, const TrigPoly& f, const std::vector<int>& orders, int K, std::uint64_t seed,
                 int reach)
        : D_(m), orders_(orders), K_(K), seed_(seed), reach_(reach) {
        const int d = m.dim();
        const int b = m.base();
        inv_pow_.assign(K + 1, 1.0);
        for (int k = 1; k <= K; ++k) inv_pow_[k] = inv_pow_[k - 1] / b;
        extra_ = static_cast<int>(std::ceil(60.0 * std::log(2.0) / std::log(static_cast<double>(b))));
        gen0_ = kaczmarz_generator(moment_sequence(Measure(D_.marginal_ifs(0)), orders[0]).values(), orders[0]);
        fac_.resize(d);
        tail_.resize(d);
        class_at_.resize(d);
        for (int c = 1; c < d; ++c) {
            const int M = c == 1 && d == 2 ? std::max(reach, orders[c]) : orders[c];
            fac_[c].resize(K + 1);
            for (int k = 1; k <= K; ++k) {
                for (int r = 0; r < D_.class_count(c); ++r) {
                    std::vector<Complex> row;
                    for (int mm = 0; mm <= M; ++mm) {
                        Complex s = 0.0;
                        const auto& law = D_.slice_law(c, r);
                        for (int t = 0; t < b; ++t)
                            if (law[t] != 0.0) s += law[t] * phase(static_cast<double>(mm) * t * inv_pow_[k], -1.0);
                        row.push_back(s);
                    }
                    fac_[c][k].push_back(std::move(row));
                }
            }
            const FactorMeasure marg = D_.marginal_ifs(c);
            for (int mm = 0; mm <= M; ++mm) tail_[c].push_back(moment(marg, mm * inv_pow_[K]).value);
            for (const auto& dv : m.digits())
                class_at_[c].push_back(D_.class_of(c, DigitVector(dv.begin(), dv.begin() + c)));
        }
        Complex nn = 0.0;
        std::vector<double> diff(d);
        for (const auto& [nu, a] : f.terms())
            for (const auto& [kappa, bb] : f.terms()) {
                for (int c = 0; c < d; ++c) diff[c] = kappa[c] - nu[c];
                nn += a * std::conj(bb) * model_moment(m, diff, K).value;
            }
        norm_sq = nn.real();
    }

    SamplePoint draw(std::int64_t i) const override {
        const auto& ifs = D_.ifs();
        const int d = ifs.dim();
        const int b = ifs.base();
        CounterRng rng(seed_, static_cast<std::uint64_t>(i));
        std::vector<std::size_t> idx(K_);
        for (auto& v : idx) v = rng.categorical(ifs.weights());
        SamplePoint sp;
        sp.x.assign(d, 0.0);
        for (int c = 0; c < d; ++c) {
            double tail = 0.0;
            std::vector<int> deep(extra_);
            for (auto& t : deep) t = static_cast<int>(rng.categorical(D_.marginal_law(c)));
            for (int k = extra_; k-- > 0;) tail = (deep[k] + tail) / b;
            double x = tail;
            for (int k = K_; k-- > 0;) x = (ifs.digits()[idx[k]][c] + x) / b;
            sp.x[c] = x;
        }
        sp.gens.push_back(gen0_);
        for (int c = 1; c < d; ++c) {
            const std::size_t M = fac_[c][1].front().size();
            std::vector<Complex> mom(tail_[c]);
            for (int k = 1; k <= K_; ++k) {
                const auto& row = fac_[c][k][class_at_[c][idx[k - 1]]];
                for (std::size_t mm = 0; mm < M; ++mm) mom[mm] *= row[mm];
            }
            sp.gens.push_back(kaczmarz_generator(mom, orders_[c]));
            if (d == 2) sp.last_moments = std::move(mom);
        }
        return sp;
    }

private:
    DigitDisintegration D_;
    std::vector<int> orders_;
    int K_;
    std::uint64_t seed_;
    int reach_;
    int extra_ = 0;
    std::vector<double> inv_pow_;
    std::vector<Complex> gen0_;
    std::vector<std::vector<std::vector<std::vector<Complex>>>> fac_;
    std::vector<std::vector<Complex>> tail_;
    std::vector<std::vector<int>> class_at_;
};

class ProductSampler : public Sampler {
public:
    ProductSampler(const ProductMeasure& m, const TrigPoly& f, const std::vector<int>& orders, std::uint64_t seed,
                   int reach)
        : m_(m), seed_(seed) {
        const int d = m.dim();
        for (int c = 0; c < d; ++c) {
            const int M = c == 1 && d == 2 ? std::max(reach, orders[c]) : orders[c];
            const MomentSequence ms = moment_sequence(to_measure(m.factors()[c]), M);
            gens_.push_back(kaczmarz_generator(ms.values(), orders[c]));
            if (c == 1 && d == 2) last_ = ms.values();
        }
        Complex nn = 0.0;
        for (const auto& [nu, a] : f.terms())
            for (const auto& [kappa, b] : f.terms()) {
                Complex w = 1.0;
                for (int c = 0; c < d; ++c) w *= moment(m.factors()[c], kappa[c] - nu[c]).value;
                nn += a * std::conj(b) * w;
            }
        norm_sq = nn.real();
    }

    SamplePoint draw(std::int64_t i) const override {
        const int d = m_.dim();
        SamplePoint sp;
        CounterRng rng(seed_, static_cast<std::uint64_t>(i));
        for (int c = 0; c < d; ++c) {
            const auto& fac = m_.factors()[c];
            if (const auto* ifs = std::get_if<DigitIFS>(&fac)) {
                const int levels = static_cast<int>(std::ceil(60.0 * std::log(2.0) / std::log(static_cast<double>(ifs->base()))));
                std::vector<std::size_t> idx(levels);
                for (auto& v : idx) v = rng.categorical(ifs->weights());
                double x = 0.0;
                for (int k = levels; k-- > 0;) x = (ifs->digits()[idx[k]][0] + x) / ifs->base();
                sp.x.push_back(x);
            } else {
                const auto& atoms = std::get<AtomicMeasure>(fac).atoms();
                std::vector<double> w;
                for (const auto& a : atoms) w.push_back(a.weight);
                sp.x.push_back(atoms[rng.categorical(w)].point[0]);
            }
        }
        sp.gens = gens_;
        sp.last_moments = last_;
        return sp;
    }

private:
    ProductMeasure m_;
    std::uint64_t seed_;
    std::vector<std::vector<Complex>> gens_;
    std::vector<Complex> last_;
};

class AtomicSampler : public Sampler {
public:
    AtomicSampler(const AtomicMeasure& m, const TrigPoly& f, const std::vector<int>& orders, std::uint64_t seed,
                  int reach)
        : m_(m), seed_(seed) {
        const int d = m.dim();
        for (const auto& a : m.atoms()) {
            weights_.push_back(a.weight);
            norm_sq += a.weight * std::norm(f(a.point));
        }
        // generators of the conditional law of coordinate c at each atom's prefix
        for (const auto& a : m.atoms()) {
            std::vector<std::vector<Complex>> g;
            std::vector<Complex> last;
            for (int c = 0; c < d; ++c) {
                const int M = c == 1 && d == 2 ? std::max(reach, orders[c]) : orders[c];
                std::vector<Complex> mom(M + 1, 0.0);
                double total = 0.0;
                for (const auto& b : m.atoms())
                    if (std::equal(a.point.begin(), a.point.begin() + c, b.point.begin())) total += b.weight;
                for (const auto& b : m.atoms()) {
                    if (!std::equal(a.point.begin(), a.point.begin() + c, b.point.begin())) continue;
                    for (int n = 0; n <= M; ++n) mom[n] += b.weight / total * phase(n * b.point[c], -1.0);
                }
                mom[0] = 1.0;
                g.push_back(kaczmarz_generator(mom, orders[c]));
                if (c == 1 && d == 2) last = mom;
            }
            gens_.push_back(std::move(g));
            last_.push_back(std::move(last));
        }
    }

    SamplePoint draw(std::int64_t i) const override {
        CounterRng rng(seed_, static_cast<std::uint64_t>(i));
        const std::size_t a = rng.categorical(weights_);
        return {m_.atoms()[a].point, gens_[a], last_[a]};
    }

private:
    AtomicMeasure m_;
    std::uint64_t seed_;
    std::vector<double> weights_;
    std::vector<std::vector<std::vector<Complex>>> gens_;
    std::vector<std::vector<Complex>> last_;
};

struct ChunkSums {
    std::vector<Complex> sum;
    std::vector<double> sum_sq;
    std::vector<double> norm_sum;  // d = 2: sum of |H_1(x_0)|^2 per n_1
};

}  // namespace

EngineResult monte_carlo(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                         const QuadratureSpec& q, int threads) {
    const int d = dimension(m);
    const std::int64_t S = q.samples;
    const int B = q.batches;
    if (B < 2 || S < 2 * B) fail(ErrorCode::InvalidArgument, "monte-carlo needs >= 2 batches of >= 2 samples");
    if (q.depth < 1) fail(ErrorCode::InvalidArgument, "monte-carlo digit depth must be >= 1");

    int reach = 0;
    const Frequency fmin = f.min_frequency(), fmax = f.max_frequency();
    if (d == 2) reach = orders[1] + std::max(std::abs(fmin[1]), std::abs(fmax[1]));

    std::unique_ptr<Sampler> sampler;
    if (const auto* ifs = std::get_if<DigitIFS>(&m))
        sampler = std::make_unique<DigitSampler>(*ifs, f, orders, q.depth, q.seed, reach);
    else if (const auto* at = std::get_if<AtomicMeasure>(&m))
        sampler = std::make_unique<AtomicSampler>(*at, f, orders, q.seed, reach);
    else
        sampler = std::make_unique<ProductSampler>(std::get<ProductMeasure>(m), f, orders, q.seed, reach);

    std::vector<int> ext;
    for (int n : orders) ext.push_back(n + 1);
    const Shape sh(ext);

    struct Chunk {
        int batch;
        std::int64_t begin, end;
    };
    std::vector<Chunk> chunks;
    for (int b = 0; b < B; ++b) {
        const std::int64_t lo = S * b / B, hi = S * (b + 1) / B;
        for (std::int64_t s = lo; s < hi; s += kChunk) chunks.push_back({b, s, std::min(hi, s + kChunk)});
    }
    std::vector<ChunkSums> sums(chunks.size());
    parallel_for(chunks.size(), threads, [&](std::size_t ci) {
        ChunkSums cs;
        cs.sum.assign(sh.size, 0.0);
        cs.sum_sq.assign(sh.size, 0.0);
        if (d == 2) cs.norm_sum.assign(orders[1] + 1, 0.0);
        std::vector<Complex> I(sh.size);
        for (std::int64_t i = chunks[ci].begin; i < chunks[ci].end; ++i) {
            const SamplePoint sp = sampler->draw(i);
            const Complex fx = f(sp.x);
            std::vector<std::vector<Complex>> g(d);
            for (int c = 0; c < d; ++c) g[c] = aux_values(sp.gens[c], sp.x[c]);
            for (std::size_t j = 0; j < sh.size; ++j) {
                const auto idx = sh.unflat(j);
                Complex v = fx;
                for (int c = 0; c < d; ++c) v *= std::conj(g[c][idx[c]]);
                cs.sum[j] += v;
                cs.sum_sq[j] += std::norm(v);
            }
            if (d == 2) {
                // H_1(x_0; n) = sum_nu f_nu e(nu_0 x_0) <e_{nu_1}, g_n>_slice
                const auto& a = sp.gens[1];
                auto mom = [&](int k) { return k < 0 ? std::conj(sp.last_moments[-k]) : sp.last_moments[k]; };
                for (int n = 0; n <= orders[1]; ++n) {
                    Complex h = 0.0;
                    for (const auto& [nu, fv] : f.terms()) {
                        Complex beta = 0.0;
                        for (int k = 0; k <= n; ++k) beta += std::conj(a[n - k]) * mom(k - nu[1]);
                        h += fv * phase(nu[0] * sp.x[0], 1.0) * beta;
                    }
                    cs.norm_sum[n] += std::norm(h);
                }
            }
        }
        sums[ci] = std::move(cs);
    });

    EngineResult r;
    r.norm_sq = sampler->norm_sq;
    r.batch_coeffs.assign(B, std::vector<Complex>(sh.size, 0.0));
    if (d == 2) r.batch_stage_norms.assign(B, {{}, std::vector<double>(orders[1] + 1, 0.0)});
    std::vector<Complex> total(sh.size, 0.0);
    std::vector<double> total_sq(sh.size, 0.0);
    std::vector<double> norm_total(d == 2 ? orders[1] + 1 : 0, 0.0);
    for (std::size_t ci = 0; ci < chunks.size(); ++ci) {
        const int b = chunks[ci].batch;
        for (std::size_t j = 0; j < sh.size; ++j) {
            r.batch_coeffs[b][j] += sums[ci].sum[j];
            total[j] += sums[ci].sum[j];
            total_sq[j] += sums[ci].sum_sq[j];
        }
        for (std::size_t n = 0; n < norm_total.size(); ++n) {
            r.batch_stage_norms[b][1][n] += sums[ci].norm_sum[n];
            norm_total[n] += sums[ci].norm_sum[n];
        }
    }
    for (int b = 0; b < B; ++b) {
        const double count = static_cast<double>(S * (b + 1) / B - S * b / B);
        for (auto& v : r.batch_coeffs[b]) v /= count;
        if (d == 2)
            for (auto& v : r.batch_stage_norms[b][1]) v /= count;
    }
    r.coeffs.resize(sh.size);
    r.standard_errors.resize(sh.size);
    for (std::size_t j = 0; j < sh.size; ++j) {
        r.coeffs[j] = total[j] / static_cast<double>(S);
        const double var = std::max(0.0, total_sq[j] / S - std::norm(r.coeffs[j]));
        r.standard_errors[j] = std::sqrt(var / S);
    }
    if (d == 2) {
        r.stage_norms.assign(2, {});
        for (auto& v : norm_total) v /= static_cast<double>(S);
        r.stage_norms[1] = std::move(norm_total);
    }
    return r;
}

}  // namespace slicefourier::detail
