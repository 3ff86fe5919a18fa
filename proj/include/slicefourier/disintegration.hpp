#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "slicefourier/measure.hpp"
#include "slicefourier/moments.hpp"

namespace slicefourier {

// Law of the last coordinate of a digit IFS given the digits of the other coordinates
// at levels 1..K. Beyond level K the last coordinate draws digits from its marginal law.
struct SliceLaw {
    int base = 2;
    std::vector<DigitVector> prefix;
    std::vector<std::vector<double>> levels;  // levels[k][t] = P(digit t at level k+1)
    std::vector<double> tail;

    MomentValue moment(double xi, double eps = kDefaultMomentTol) const;
    MomentSequence moments(int order, double eps = kDefaultMomentTol) const;
};

SliceLaw slice_law(const DigitIFS& m, std::span<const DigitVector> prefix);
// Slice of a product whose last factor is a digit IFS; independent of any prefix.
SliceLaw slice_law(const ProductMeasure& m, int levels);

// Conditional law of the last coordinate of an atomic measure at a marginal atom.
AtomicMeasure conditional_slice(const AtomicMeasure& m, std::span<const double> prefix_point);

// Digit-level disintegration of a digit IFS along coordinates 0, 1, ..., d-1.
//
// At stage c the digits of coordinates 0..c-1 are grouped into classes: two prefixes
// share a class when they induce the same law on (next digit, class of the extended
// prefix). Stage 0 has a single root class. Conditional slice laws, and every nested
// slice integral, depend on a digit prefix only through its class.
class DigitDisintegration {
public:
    struct Transition {
        int to;                       // class at stage c+1
        double prob;                  // P(to | from)
        std::vector<double> digit_law;  // P(t | from, to), t = 0..base-1
    };
    struct Member {
        DigitVector digit;  // projection onto coordinates 0..c-1
        double prob;        // P(digit | class)
    };
    struct JointClass {
        std::vector<int> chain;  // class at stages 1..d-1
        double prob;
        std::vector<std::pair<std::size_t, double>> digits;  // (index into IFS digits, P(digit | joint))
    };

    explicit DigitDisintegration(const DigitIFS& m);

    const DigitIFS& ifs() const { return ifs_; }
    int dim() const { return ifs_.dim(); }
    int base() const { return ifs_.base(); }

    int class_count(int c) const { return static_cast<int>(stages_[c].size()); }
    double class_probability(int c, int r) const { return stages_[c][r].prob; }
    const std::vector<double>& slice_law(int c, int r) const { return stages_[c][r].law; }
    const std::vector<Member>& members(int c, int r) const { return stages_[c][r].members; }
    // Defined for c <= dim-2.
    const std::vector<Transition>& transitions(int c, int r) const { return stages_[c][r].out; }
    // Class at stage c of a digit projected onto coordinates 0..c-1.
    int class_of(int c, const DigitVector& prefix) const;

    const std::vector<JointClass>& joint_classes() const { return joint_; }
    int joint_class_of_digit(std::size_t digit_index) const { return joint_of_digit_[digit_index]; }

    const std::vector<double>& marginal_law(int c) const { return marginal_laws_[c]; }
    const DigitIFS& marginal_ifs(int c) const { return marginal_ifs_[c]; }

private:
    struct ClassData {
        double prob = 0.0;
        std::vector<double> law;
        std::vector<int> next;  // class at c+1 reached by digit t, -1 if P(t) = 0
        std::vector<Member> members;
        std::vector<Transition> out;
    };

    DigitIFS ifs_;
    std::vector<std::vector<ClassData>> stages_;
    std::vector<std::map<DigitVector, int>> class_of_;
    std::vector<JointClass> joint_;
    std::vector<int> joint_of_digit_;
    std::vector<std::vector<double>> marginal_laws_;
    std::vector<DigitIFS> marginal_ifs_;
};

// Slice of the last coordinate at a sampled point of the first d-1 coordinates.
struct SampledSlice {
    std::vector<double> point;
    MomentSequence moments;
};

// Digit IFS: `count` chaos-game digit prefixes of length `depth`, slices from slice_law.
// Product: `count` sampled points, all sharing the last factor as slice.
// Atomic: the first `count` marginal atoms with their conditional slices.
std::vector<SampledSlice> sample_slices(const Measure& m, int count, int depth, std::uint64_t seed,
                                        int order, double eps = kDefaultMomentTol);

// One-dimensional digit IFS on {t : law[t] > 0}.
DigitIFS digit_law_ifs(int base, std::span<const double> law);

}  // namespace slicefourier
