#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "engines.hpp"
#include "slicefourier/error.hpp"
#include "slicefourier/kaczmarz.hpp"
#include "slicefourier/moments.hpp"

namespace slicefourier::detail {

namespace {

// Marginal atoms on coordinates 0..c-1 for c = 0..d with their conditional children.
struct AtomTree {
    struct Node {
        std::vector<double> point;
        double weight = 0.0;
        std::vector<std::pair<int, double>> children;  // (node at c+1, P(child | node))
        std::vector<Complex> gen;                      // dual generator of the child law
    };
    std::vector<std::vector<Node>> level;

    AtomTree(const AtomicMeasure& m, const std::vector<int>& orders) {
        const int d = m.dim();
        level.resize(d + 1);
        std::vector<std::map<std::vector<double>, int>> index(d + 1);
        for (const auto& a : m.atoms()) {
            for (int c = 0; c <= d; ++c) {
                std::vector<double> p(a.point.begin(), a.point.begin() + c);
                auto [it, inserted] = index[c].try_emplace(p, static_cast<int>(level[c].size()));
                if (inserted) level[c].push_back({p, 0.0, {}, {}});
                level[c][it->second].weight += a.weight;
                if (c > 0 && inserted) {
                    const int parent = index[c - 1].at(std::vector<double>(a.point.begin(), a.point.begin() + c - 1));
                    level[c - 1][parent].children.emplace_back(it->second, 0.0);
                }
            }
        }
        for (int c = 0; c < d; ++c) {
            for (auto& node : level[c]) {
                std::vector<Complex> mom(orders[c] + 1, 0.0);
                for (auto& [child, p] : node.children) {
                    p = level[c + 1][child].weight / node.weight;
                    const double t = level[c + 1][child].point[c];
                    for (int n = 0; n <= orders[c]; ++n) {
                        const double ph = n * t;
                        mom[n] += p * std::polar(1.0, -2.0 * std::numbers::pi * (ph - std::floor(ph)));
                    }
                }
                mom[0] = 1.0;
                node.gen = kaczmarz_generator(mom, orders[c]);
            }
        }
    }
};

}  // namespace

EngineResult atomic_direct(const AtomicMeasure& m, const TrigPoly& f, const std::vector<int>& orders) {
    const int d = m.dim();
    const AtomTree tree(m, orders);
    std::vector<int> ext;
    for (int n : orders) ext.push_back(n + 1);
    const Shape sh(ext);
    EngineResult r;
    r.coeffs.assign(sh.size, 0.0);
    for (const auto& a : m.atoms()) {
        const Complex fx = f(a.point);
        r.norm_sq += a.weight * std::norm(fx);
        std::vector<std::vector<Complex>> g(d);
        int node = 0;
        for (int c = 0; c < d; ++c) {
            const auto& nd = tree.level[c][node];
            g[c] = aux_values(nd.gen, a.point[c]);
            for (const auto& [child, p] : nd.children)
                if (tree.level[c + 1][child].point[c] == a.point[c]) node = child;
        }
        for (std::size_t i = 0; i < sh.size; ++i) {
            const auto idx = sh.unflat(i);
            Complex v = a.weight * fx;
            for (int c = 0; c < d; ++c) v *= std::conj(g[c][idx[c]]);
            r.coeffs[i] += v;
        }
    }
    return r;
}

EngineResult atomic_staged(const AtomicMeasure& m, const TrigPoly& f, const std::vector<int>& orders) {
    const int d = m.dim();
    const AtomTree tree(m, orders);
    EngineResult r;
    r.stage_norms.assign(d, {});
    std::vector<std::vector<Complex>> H;
    for (const auto& nd : tree.level[d]) {
        const Complex fx = f(nd.point);
        r.norm_sq += nd.weight * std::norm(fx);
        H.push_back({fx});
    }
    std::size_t tail = 1;
    for (int c = d - 1; c >= 0; --c) {
        const int N = orders[c];
        std::vector<std::vector<Complex>> out;
        for (const auto& nd : tree.level[c]) {
            std::vector<Complex> h((N + 1) * tail, 0.0);
            for (const auto& [child, p] : nd.children) {
                const auto g = aux_values(nd.gen, tree.level[c + 1][child].point[c]);
                const auto& src = H[child];
                for (int n = 0; n <= N; ++n) {
                    const Complex w = p * std::conj(g[n]);
                    for (std::size_t j = 0; j < tail; ++j) h[n * tail + j] += w * src[j];
                }
            }
            out.push_back(std::move(h));
        }
        tail *= static_cast<std::size_t>(N + 1);
        if (c > 0) {
            auto& norms = r.stage_norms[c];
            norms.assign(tail, 0.0);
            for (std::size_t y = 0; y < out.size(); ++y)
                for (std::size_t t = 0; t < tail; ++t) norms[t] += tree.level[c][y].weight * std::norm(out[y][t]);
        }
        H = std::move(out);
    }
    r.coeffs = H.front();
    return r;
}

namespace {

struct ProductSetup {
    std::vector<MomentSequence> moments;
    // beta[c][n][nu - lo_c] = <e_nu, g_n>_{mu_c}
    std::vector<std::vector<std::vector<Complex>>> beta;
    std::vector<int> lo;

    ProductSetup(const ProductMeasure& m, const TrigPoly& f, const std::vector<int>& orders) {
        const int d = m.dim();
        const Frequency fmin = f.min_frequency(), fmax = f.max_frequency();
        for (int c = 0; c < d; ++c) {
            const int reach = std::max({orders[c] + std::abs(fmin[c]), orders[c] + std::abs(fmax[c]),
                                        fmax[c] - fmin[c]});
            moments.push_back(moment_sequence(to_measure(m.factors()[c]), reach));
            const AuxMatrix A = aux_matrix(moments[c], orders[c]);
            lo.push_back(fmin[c]);
            std::vector<std::vector<Complex>> bc(orders[c] + 1);
            for (int n = 0; n <= orders[c]; ++n) {
                for (int nu = fmin[c]; nu <= fmax[c]; ++nu) {
                    Complex s = 0.0;
                    for (int k = 0; k <= n; ++k) s += std::conj(A(n, k)) * moments[c](k - nu);
                    bc[n].push_back(s);
                }
            }
            beta.push_back(std::move(bc));
        }
    }

    Complex joint_moment(const Frequency& xi, int dims) const {
        Complex v = 1.0;
        for (int c = 0; c < dims; ++c) v *= moments[c](xi[c]);
        return v;
    }
};

double product_norm_sq(const ProductSetup& ps, const TrigPoly& f) {
    Complex nn = 0.0;
    Frequency diff(f.dim());
    for (const auto& [nu, a] : f.terms()) {
        for (const auto& [kappa, b] : f.terms()) {
            for (int c = 0; c < f.dim(); ++c) diff[c] = kappa[c] - nu[c];
            nn += a * std::conj(b) * ps.joint_moment(diff, f.dim());
        }
    }
    return nn.real();
}

}  // namespace

EngineResult product_direct(const ProductMeasure& m, const TrigPoly& f, const std::vector<int>& orders) {
    const int d = m.dim();
    const ProductSetup ps(m, f, orders);
    std::vector<int> ext;
    for (int n : orders) ext.push_back(n + 1);
    const Shape sh(ext);
    EngineResult r;
    r.coeffs.assign(sh.size, 0.0);
    for (std::size_t i = 0; i < sh.size; ++i) {
        const auto idx = sh.unflat(i);
        Complex s = 0.0;
        for (const auto& [nu, fv] : f.terms()) {
            Complex v = fv;
            for (int c = 0; c < d; ++c) v *= ps.beta[c][idx[c]][nu[c] - ps.lo[c]];
            s += v;
        }
        r.coeffs[i] = s;
    }
    r.norm_sq = product_norm_sq(ps, f);
    return r;
}

EngineResult product_staged(const ProductMeasure& m, const TrigPoly& f, const std::vector<int>& orders) {
    const int d = m.dim();
    const ProductSetup ps(m, f, orders);
    EngineResult r;
    r.stage_norms.assign(d, {});
    std::vector<Frequency> in_support = projected_support(f, d);
    std::vector<Complex> in;
    for (const auto& nu : in_support) in.push_back(f.coefficient(nu));
    std::size_t tail = 1;
    for (int c = d - 1; c >= 0; --c) {
        const int N = orders[c];
        const auto out_support = projected_support(f, c);
        std::vector<Complex> out(out_support.size() * (N + 1) * tail, 0.0);
        for (std::size_t i = 0; i < in_support.size(); ++i) {
            const Frequency p(in_support[i].begin(), in_support[i].begin() + c);
            const std::size_t pi = std::lower_bound(out_support.begin(), out_support.end(), p) - out_support.begin();
            for (int n = 0; n <= N; ++n) {
                const Complex b = ps.beta[c][n][in_support[i][c] - ps.lo[c]];
                for (std::size_t j = 0; j < tail; ++j)
                    out[(pi * (N + 1) + n) * tail + j] += b * in[i * tail + j];
            }
        }
        tail *= static_cast<std::size_t>(N + 1);
        if (c > 0) {
            auto& norms = r.stage_norms[c];
            norms.assign(tail, 0.0);
            const std::size_t P = out_support.size();
            Frequency diff(c);
            for (std::size_t a = 0; a < P; ++a) {
                for (std::size_t b = 0; b < P; ++b) {
                    for (int j = 0; j < c; ++j) diff[j] = out_support[b][j] - out_support[a][j];
                    const Complex w = ps.joint_moment(diff, c);
                    for (std::size_t t = 0; t < tail; ++t)
                        norms[t] += (out[a * tail + t] * std::conj(out[b * tail + t]) * w).real();
                }
            }
        }
        in = std::move(out);
        in_support = out_support;
    }
    r.coeffs = std::move(in);
    r.norm_sq = product_norm_sq(ps, f);
    return r;
}

}  // namespace slicefourier::detail
