#include "slicefourier/kaczmarz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slicefourier/chaos.hpp"
#include "slicefourier/error.hpp"

namespace slicefourier {

AuxMatrix::AuxMatrix(std::vector<Complex> generator) : a_(std::move(generator)) {
    if (a_.empty() || a_[0] != Complex(1.0))
        fail(ErrorCode::InvalidArgument, "aux generator must start with 1");
}

std::vector<Complex> AuxMatrix::row(int n) const {
    std::vector<Complex> r(n + 1);
    for (int k = 0; k <= n; ++k) r[k] = a_[n - k];
    return r;
}

double AuxMatrix::row_l2(int n) const {
    double s = 0.0;
    for (int k = 0; k <= n; ++k) s += std::norm(a_[k]);
    return std::sqrt(s);
}

std::vector<Complex> kaczmarz_generator(std::span<const Complex> moments, int N) {
    if (N < 0) fail(ErrorCode::InvalidArgument, "aux order must be >= 0");
    if (static_cast<int>(moments.size()) <= N)
        fail(ErrorCode::MissingMoment, "aux order " + std::to_string(N) + " needs moments up to that order");
    std::vector<Complex> a(N + 1);
    a[0] = 1.0;
    for (int m = 1; m <= N; ++m) {
        Complex s = 0.0;
        for (int j = 1; j <= m; ++j) s += std::conj(moments[j]) * a[m - j];
        a[m] = -s;
    }
    return a;
}

AuxMatrix aux_matrix(const MomentSequence& moments, int N) {
    if (N > moments.order())
        fail(ErrorCode::MissingMoment, "aux order " + std::to_string(N) + " exceeds available moments");
    return AuxMatrix(kaczmarz_generator(moments.values(), N));
}

AuxMatrix slice_aux(const SliceLaw& slice, int N, double eps) {
    return aux_matrix(slice.moments(N, eps), N);
}

double consistency_residual(const AuxMatrix& A, const MomentSequence& moments) {
    const int N = A.order();
    double worst = 0.0;
    for (int n = 0; n <= N; ++n) {
        for (int k = 0; k <= N; ++k) {
            Complex s = 0.0;
            for (int j = k; j <= n; ++j) s += std::conj(moments(n - j)) * A(j, k);
            worst = std::max(worst, std::abs(s - (n == k ? 1.0 : 0.0)));
        }
    }
    return worst;
}

std::vector<Complex> exponential_inner(const MomentSequence& moments, const TrigPoly& f, int N) {
    if (f.dim() != 1) fail(ErrorCode::InvalidArgument, "one-dimensional trig poly expected");
    std::vector<Complex> F(N + 1, 0.0);
    for (int k = 0; k <= N; ++k)
        for (const auto& [nu, c] : f.terms()) F[k] += c * moments(k - nu[0]);
    return F;
}

std::vector<Complex> aux_coefficients(const MomentSequence& moments, const AuxMatrix& A,
                                      const TrigPoly& f) {
    const int N = A.order();
    const auto F = exponential_inner(moments, f, N);
    std::vector<Complex> c(N + 1, 0.0);
    for (int n = 0; n <= N; ++n)
        for (int k = 0; k <= n; ++k) c[n] += std::conj(A(n, k)) * F[k];
    return c;
}

ParsevalReport parseval_defect(const MomentSequence& moments, const TrigPoly& f, int N) {
    ParsevalReport r;
    const AuxMatrix A = aux_matrix(moments, N);
    r.coefficients = aux_coefficients(moments, A, f);
    double s = 0.0;
    for (const auto& c : r.coefficients) {
        s += std::norm(c);
        r.partial_sums.push_back(s);
    }
    const MomentValue nn = trig_inner(
        [&](const Frequency& xi) { return MomentValue{moments(xi[0]), moments.error(xi[0])}; }, f, f);
    r.norm_sq = nn.value.real();
    r.norm_error = nn.error;
    r.defect = r.norm_sq - s;
    return r;
}

namespace {

using Dense = std::vector<std::vector<Complex>>;

Dense toeplitz_lower(const std::vector<Complex>& col) {
    const std::size_t n = col.size();
    Dense m(n, std::vector<Complex>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) m[i][j] = col[i - j];
    return m;
}

// Inverse of a unit lower-triangular matrix, column by column.
Dense unit_lower_inverse(const Dense& L) {
    const std::size_t n = L.size();
    Dense X(n, std::vector<Complex>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        X[k][k] = 1.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            Complex s = 0.0;
            for (std::size_t j = k; j < i; ++j) s += L[i][j] * X[j][k];
            X[i][k] = -s;
        }
    }
    return X;
}

}  // namespace

OperatorKaczmarzReport operator_kaczmarz_report(const Measure& m, int N,
                                                const OperatorReportOptions& opts) {
    if (dimension(m) < 2) fail(ErrorCode::DimensionTooSmall, "operator report needs dimension >= 2");
    if (N < 1 || N > 64) fail(ErrorCode::InvalidArgument, "operator report order must be in 1..64");
    const auto slices = sample_slices(m, opts.prefixes, opts.depth, opts.seed, N);

    // seeded test vectors on indices 0..N/2: unit vectors plus random combinations
    const int L = N / 2;
    std::vector<std::vector<Complex>> tests;
    for (int j = 0; j <= L; ++j) {
        std::vector<Complex> v(N + 1, 0.0);
        v[j] = 1.0;
        tests.push_back(std::move(v));
    }
    for (int t = 0; t < 4; ++t) {
        CounterRng rng(opts.seed, 0xfeed0000ULL + t);
        std::vector<Complex> v(N + 1, 0.0);
        double nn = 0.0;
        for (int j = 0; j <= L; ++j) {
            v[j] = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
            nn += std::norm(v[j]);
        }
        for (auto& x : v) x /= std::sqrt(nn);
        tests.push_back(std::move(v));
    }

    OperatorKaczmarzReport rep;
    rep.order = N;
    rep.slices = static_cast<int>(slices.size());
    double defect_sum = 0.0;
    for (std::size_t s = 0; s < slices.size(); ++s) {
        std::vector<Complex> col(N + 1);
        for (int j = 0; j <= N; ++j) col[j] = slices[s].moments(j);
        const Dense IM = toeplitz_lower(col);
        const Dense IU = unit_lower_inverse(IM);
        for (int i = 0; i <= N; ++i) {
            for (int k = 0; k <= N; ++k) {
                Complex acc = 0.0;
                for (int j = k; j <= i; ++j) acc += IM[i][j] * IU[j][k];
                rep.residual = std::max(rep.residual, std::abs(acc - (i == k ? 1.0 : 0.0)));
            }
        }
        double worst = 0.0;
        for (const auto& v : tests) {
            double uv = 0.0, vv = 0.0;
            for (int i = 0; i <= N; ++i) {
                Complex acc = 0.0;
                for (int k = 0; k < i; ++k) acc += IU[i][k] * v[k];
                uv += std::norm(acc);
                vv += std::norm(v[i]);
            }
            worst = std::max(worst, std::abs(uv - vv));
        }
        rep.isometry_defect = std::max(rep.isometry_defect, worst);
        defect_sum += worst;
        if (s == 0) {
            rep.identity_plus_m = IM;
            rep.identity_plus_u = IU;
        }
    }
    rep.mean_isometry_defect = defect_sum / rep.slices;
    return rep;
}

}  // namespace slicefourier
