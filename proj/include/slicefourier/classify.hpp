#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slicefourier/measure.hpp"

namespace slicefourier {

enum class Verdict { Singular, Lebesgue };

struct CoordinateRecord {
    int coordinate = 0;
    std::vector<std::pair<int, double>> reduced;  // (digit, merged weight), digits ascending
    double lebesgue_weight = 0.0;                 // 1/base
    bool full = false;                            // reduced digit set is {0..base-1}
    Verdict verdict = Verdict::Singular;
    std::string warning;
};

struct ClassificationReport {
    int base = 2;
    std::vector<CoordinateRecord> coordinates;
    bool overall = false;  // every coordinate singular
};

inline constexpr double kLebesgueWeightTol = 1e-12;

ClassificationReport classify(const DigitIFS& m);

// true for atomic measures, classify().overall for a digit IFS, and the
// conjunction over factors for products.
bool slice_singularity_gate(const Measure& m);

const char* to_string(Verdict v);

}  // namespace slicefourier
