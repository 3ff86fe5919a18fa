#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "slicefourier/measure.hpp"
#include "slicefourier/trig_poly.hpp"

namespace slicefourier {

struct MomentValue {
    Complex value;
    double error = 0.0;  // bound on |value - exact|
};

inline constexpr double kDefaultMomentTol = 1e-15;
inline constexpr int kDefaultDepthCap = 2048;

// mu^(xi) = integral of exp(-2 pi i xi.x) dmu(x).
MomentValue moment(const Measure& m, std::span<const double> xi, double eps = kDefaultMomentTol,
                   int depth_cap = kDefaultDepthCap);
MomentValue moment(const FactorMeasure& m, double xi, double eps = kDefaultMomentTol,
                   int depth_cap = kDefaultDepthCap);
MomentValue moment(const Measure& m, const Frequency& xi, double eps = kDefaultMomentTol);

// m(eta) = sum_d w_d exp(-2 pi i d.eta), the one-level factor of a digit IFS.
Complex digit_mask(const DigitIFS& m, std::span<const double> eta);

// Smallest K >= 1 with exp(2 pi l1 b^-K) - 1 <= eps.
int truncation_depth(int base, double l1, double eps, int depth_cap = kDefaultDepthCap);

// Moment of the depth-K quadrature model of a digit IFS: the first K digit levels are
// joint, deeper levels draw each coordinate independently from its marginal digit law.
// Coincides with the IFS measure when the weights are a product of coordinate laws.
MomentValue model_moment(const DigitIFS& m, std::span<const double> xi, int depth,
                         double eps = kDefaultMomentTol);
// Bound on |model_moment - moment| for the given frequency.
double model_moment_gap(const DigitIFS& m, std::span<const double> xi, int depth);

// mu^(n) for n = 0..order of a one-dimensional measure; negative n by conjugate symmetry.
class MomentSequence {
public:
    MomentSequence(std::vector<Complex> values, std::vector<double> errors = {});

    int order() const { return static_cast<int>(values_.size()) - 1; }
    Complex operator()(int n) const;
    double error(int n) const;
    const std::vector<Complex>& values() const { return values_; }

private:
    std::vector<Complex> values_;
    std::vector<double> errors_;
};

MomentSequence moment_sequence(const Measure& m, int order, double eps = kDefaultMomentTol);

// Moments of a measure at a fixed set of integer frequencies.
class MomentTable {
public:
    MomentTable(std::shared_ptr<const Measure> m, const std::vector<Frequency>& frequencies,
                double eps = kDefaultMomentTol);
    // All frequencies in the box lo..hi (inclusive, componentwise).
    static MomentTable box(std::shared_ptr<const Measure> m, const Frequency& lo,
                           const Frequency& hi, double eps = kDefaultMomentTol);

    const Measure& measure() const { return *measure_; }
    bool contains(const Frequency& xi) const { return entries_.count(xi) != 0; }
    MomentValue at(const Frequency& xi) const;  // throws missing-moment
    const std::map<Frequency, MomentValue>& entries() const { return entries_; }

private:
    std::shared_ptr<const Measure> measure_;
    std::map<Frequency, MomentValue> entries_;
};

using MomentFn = std::function<MomentValue(const Frequency&)>;

// <p,q> = sum p_nu conj(q_kappa) mu^(kappa - nu); error is the propagated moment error.
MomentValue trig_inner(const MomentFn& moments, const TrigPoly& p, const TrigPoly& q);
MomentValue trig_inner(const Measure& m, const TrigPoly& p, const TrigPoly& q,
                       double eps = kDefaultMomentTol);
MomentValue trig_inner(const MomentTable& table, const TrigPoly& p, const TrigPoly& q);

// ||p||^2 in L2(m). Purely atomic measures are summed pointwise, which keeps small
// differences accurate; otherwise falls back to the moment form, computed with `moments`
// when given.
double poly_norm_sq(const Measure& m, const TrigPoly& p, const MomentTable* moments = nullptr);

}  // namespace slicefourier
