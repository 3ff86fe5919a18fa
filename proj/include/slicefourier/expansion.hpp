#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slicefourier/measure.hpp"
#include "slicefourier/trig_poly.hpp"

namespace slicefourier {

enum class QuadratureMode { PrefixExact, MonteCarlo };

struct QuadratureSpec {
    QuadratureMode mode = QuadratureMode::PrefixExact;
    int depth = 12;               // digit levels enumerated (prefix-exact) or sampled jointly (monte-carlo)
    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
    double leaf_budget = 5e6;     // prefix-exact enumeration limit
    int batches = 10;             // monte-carlo batch means
};

QuadratureSpec prefix_exact(int depth);
QuadratureSpec monte_carlo(std::int64_t samples, std::uint64_t seed = 0, int depth = 24);
// "prefix:K" or "mc:COUNT" (optionally "mc:COUNT:DEPTH").
QuadratureSpec parse_quadrature(const std::string& text, std::uint64_t seed = 0);
std::string to_string(const QuadratureSpec& q);

// Row-major index helper: the last index varies fastest.
struct Shape {
    std::vector<int> extent;
    std::vector<std::size_t> stride;
    std::size_t size = 1;

    Shape() = default;
    explicit Shape(std::vector<int> extents);
    std::size_t flat(std::span<const int> index) const;
    std::vector<int> unflat(std::size_t flat) const;
};

struct CoeffTensor {
    std::vector<int> orders;  // N_0..N_{d-1}, index n_c runs over 0..N_c
    std::vector<Complex> values;
    std::vector<double> standard_errors;  // monte-carlo only
    QuadratureSpec quadrature;
    double norm_sq = 0.0;         // |f|^2 under the quadrature reference measure
    double error_estimate = 0.0;  // model-to-measure moment gap scaled by |f|_1

    int dim() const { return static_cast<int>(orders.size()); }
    Shape shape() const;
    Complex at(std::span<const int> index) const;
    double energy() const;  // sum |c|^2
};

// Coefficients c_n = < ... < f, g^{(d-1)}_{n_{d-1}} >_slice ..., g^{(0)}_{n_0} >, nested from the
// last coordinate inwards, for 0 <= n_c <= orders[c].
//
// prefix-exact: for digit IFS the reference measure enumerates the first `depth` digit
// levels jointly and draws deeper digits coordinatewise from the marginal laws (equal to
// the IFS measure for product weights). Atomic and product measures are integrated exactly.
// monte-carlo: sampled points with exact slice integrals along each sample.
CoeffTensor analyze(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                    const QuadratureSpec& q = {}, int threads = 1);

// Same coefficients through the stage-by-stage composition: integrate the last coordinate
// against its slice dual sequence, then the next, down to the first marginal.
// Prefix-exact only.
CoeffTensor analyze_staged(const Measure& m, const TrigPoly& f, const std::vector<int>& orders,
                           const QuadratureSpec& q = {}, int threads = 1);

// sum_n c_n exp(2 pi i n.x) at each point.
std::vector<Complex> synthesize(const CoeffTensor& c, const std::vector<std::vector<double>>& points);
// The rectangular partial sum as a trig poly.
TrigPoly partial_sum(const CoeffTensor& c, std::span<const int> orders);

struct SweepRow {
    std::vector<int> orders;
    double iterated_error = 0.0;     // error of the iterated-order partial sum
    double iterated_stderr = 0.0;    // monte-carlo batch standard error
    double rectangular_error = 0.0;  // |f - rectangular partial sum| in L2(mu)
};

struct ReconstructionResult {
    double error = 0.0;  // rectangular error at the full orders
    std::vector<SweepRow> sweep;
    CoeffTensor coefficients;
};

// Sweep over all orders below `orders`, the first index advancing fastest. At orders M the
// iterated partial sum completes every earlier row of the later indices, so its error is
// |f|^2 - sum of the completed stage energies - sum_{j<=M_0} |c_{j,M_1..}|^2 and is
// nonincreasing along the sweep.
ReconstructionResult reconstruction_error(const Measure& m, const TrigPoly& f,
                                          const std::vector<int>& orders, const QuadratureSpec& q = {},
                                          int threads = 1);

}  // namespace slicefourier
