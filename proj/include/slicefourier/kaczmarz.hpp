#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slicefourier/disintegration.hpp"
#include "slicefourier/measure.hpp"
#include "slicefourier/moments.hpp"
#include "slicefourier/trig_poly.hpp"

namespace slicefourier {

// Coefficients of g_n = sum_{k<=n} A(n,k) e_k for the sequence
// g_0 = e_0, g_n = e_n - sum_{k<n} <e_n,e_k> g_k with <e_n,e_k> = mu^(k-n).
// A is unit lower-triangular Toeplitz, A(n,k) = a_{n-k}, so only a is stored.
class AuxMatrix {
public:
    explicit AuxMatrix(std::vector<Complex> generator);

    int order() const { return static_cast<int>(a_.size()) - 1; }
    Complex operator()(int n, int k) const { return k <= n ? a_[n - k] : Complex(0.0); }
    const std::vector<Complex>& generator() const { return a_; }
    std::vector<Complex> row(int n) const;
    // Row-norm of g_n as an exponential coefficient vector.
    double row_l2(int n) const;

private:
    std::vector<Complex> a_;
};

// a_0 = 1, a_m = -sum_{j=1..m} conj(mu^(j)) a_{m-j}: forward substitution in T.A = I.
// moments[0..N] must be available.
std::vector<Complex> kaczmarz_generator(std::span<const Complex> moments, int N);

AuxMatrix aux_matrix(const MomentSequence& moments, int N);
AuxMatrix slice_aux(const SliceLaw& slice, int N, double eps = kDefaultMomentTol);

// max |(T.A - I)_{n,k}| with T(n,j) = conj(mu^(n-j)).
double consistency_residual(const AuxMatrix& A, const MomentSequence& moments);

// F_k = <f, e_k> = sum_nu f_nu mu^(k - nu), k = 0..N.
std::vector<Complex> exponential_inner(const MomentSequence& moments, const TrigPoly& f, int N);
// <f, g_n> = sum_k conj(A(n,k)) F_k, n = 0..order.
std::vector<Complex> aux_coefficients(const MomentSequence& moments, const AuxMatrix& A,
                                      const TrigPoly& f);

struct ParsevalReport {
    std::vector<double> partial_sums;  // s_n = sum_{k<=n} |<f,g_k>|^2
    std::vector<Complex> coefficients;
    double norm_sq = 0.0;
    double norm_error = 0.0;
    double defect = 0.0;  // norm_sq - s_N
};

ParsevalReport parseval_defect(const MomentSequence& moments, const TrigPoly& f, int N);

struct OperatorReportOptions {
    int prefixes = 64;
    int depth = 12;
    std::uint64_t seed = 0;
};

struct OperatorKaczmarzReport {
    int order = 0;
    int slices = 0;
    double residual = 0.0;           // max over slices of max-entry |(I+M)(I+U) - I|
    double isometry_defect = 0.0;    // max over slices and test vectors
    double mean_isometry_defect = 0.0;
    // blocks of the first sampled slice, for inspection
    std::vector<std::vector<Complex>> identity_plus_m;
    std::vector<std::vector<Complex>> identity_plus_u;
};

// Slice fields of the operator algorithm at truncation N. For each sampled slice x,
// I+M is lower-triangular Toeplitz with entries slice^(j-k) and I+U is its inverse by
// forward substitution. The isometry defect is max | |U v|^2 - |v|^2 | over test vectors
// supported on indices <= N/2.
OperatorKaczmarzReport operator_kaczmarz_report(const Measure& m, int N,
                                                const OperatorReportOptions& opts = {});

}  // namespace slicefourier
