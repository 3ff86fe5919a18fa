#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slicefourier/measure.hpp"

namespace slicefourier {

// Counter-based generator: every draw is a pure function of (seed, stream, counter).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    static std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

    std::uint64_t next_u64() { return hash(seed_, stream_, counter_++); }
    // Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // Index drawn from the discrete law given by (nonnegative, summing to ~1) weights.
    std::size_t categorical(std::span<const double> weights);

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

// Digit-vector indices (into m.digits()) of sample `index`, levels 1..depth.
std::vector<std::size_t> chaos_digit_indices(const DigitIFS& m, std::uint64_t index, int depth,
                                             std::uint64_t seed);

// count points sum_{k<=depth} d_k base^-k with i.i.d. digit vectors d_k.
std::vector<std::vector<double>> chaos_sample(const DigitIFS& m, std::size_t count, int depth,
                                              std::uint64_t seed);

// Point from a digit sequence (one digit vector per level).
std::vector<double> point_from_digits(int base, std::span<const DigitVector> digits);

}  // namespace slicefourier
