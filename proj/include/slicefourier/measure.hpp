#pragma once

#include <span>
#include <variant>
#include <vector>

namespace slicefourier {

using DigitVector = std::vector<int>;

// Invariant measure of the maps x -> (x + d) / base on [0,1)^dim, map d chosen with weight w_d.
class DigitIFS {
public:
    // Duplicate digit vectors are merged by summing their weights.
    DigitIFS(int base, std::vector<DigitVector> digits, std::vector<double> weights);

    int base() const { return base_; }
    int dim() const { return dim_; }
    const std::vector<DigitVector>& digits() const { return digits_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return digits_.size(); }

private:
    int base_;
    int dim_;
    std::vector<DigitVector> digits_;
    std::vector<double> weights_;
};

struct Atom {
    std::vector<double> point;
    double weight;
};

class AtomicMeasure {
public:
    // Coincident points are merged by summing their weights.
    explicit AtomicMeasure(std::vector<Atom> atoms);

    int dim() const { return dim_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

private:
    int dim_;
    std::vector<Atom> atoms_;
};

using FactorMeasure = std::variant<DigitIFS, AtomicMeasure>;

class ProductMeasure {
public:
    explicit ProductMeasure(std::vector<FactorMeasure> factors);

    int dim() const { return static_cast<int>(factors_.size()); }
    const std::vector<FactorMeasure>& factors() const { return factors_; }

private:
    std::vector<FactorMeasure> factors_;
};

using Measure = std::variant<DigitIFS, AtomicMeasure, ProductMeasure>;

int dimension(const Measure& m);
int dimension(const FactorMeasure& m);
Measure to_measure(const FactorMeasure& f);

// Coordinates are 0-based; keep must be a nonempty strictly increasing subset.
// A product reduced to one factor is returned as that factor.
Measure marginal(const Measure& m, std::span<const int> keep);
// One-dimensional marginal on coordinate c.
Measure coordinate_marginal(const Measure& m, int c);
// Image under x -> (x[order[0]], ..., x[order[d-1]]).
Measure permuted(const Measure& m, std::span<const int> order);

// Lebesgue measure on [0,1)^dim as the full uniform digit IFS in the given base.
DigitIFS lebesgue_ifs(int base, int dim);

}  // namespace slicefourier
