#include "slicefourier/chaos.hpp"

#include "slicefourier/error.hpp"

namespace slicefourier {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
    h = mix(h ^ (stream + 0x632be59bd9b4e019ULL));
    return mix(h ^ (counter * 0x9e3779b97f4a7c15ULL + 0x8cb92ba72f3d8dd7ULL));
}

std::size_t CounterRng::categorical(std::span<const double> weights) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

std::vector<std::size_t> chaos_digit_indices(const DigitIFS& m, std::uint64_t index, int depth,
                                             std::uint64_t seed) {
    if (depth < 1) fail(ErrorCode::InvalidArgument, "chaos depth must be >= 1");
    CounterRng rng(seed, index);
    std::vector<std::size_t> out(depth);
    for (auto& i : out) i = rng.categorical(m.weights());
    return out;
}

std::vector<double> point_from_digits(int base, std::span<const DigitVector> digits) {
    if (digits.empty()) fail(ErrorCode::InvalidArgument, "point needs at least one digit level");
    const std::size_t d = digits.front().size();
    std::vector<double> x(d, 0.0);
    for (std::size_t k = digits.size(); k-- > 0;)
        for (std::size_t j = 0; j < d; ++j) x[j] = (digits[k][j] + x[j]) / base;
    return x;
}

std::vector<std::vector<double>> chaos_sample(const DigitIFS& m, std::size_t count, int depth,
                                              std::uint64_t seed) {
    if (count < 1) fail(ErrorCode::InvalidArgument, "chaos count must be >= 1");
    std::vector<std::vector<double>> out;
    out.reserve(count);
    std::vector<DigitVector> levels(depth);
    for (std::size_t i = 0; i < count; ++i) {
        const auto idx = chaos_digit_indices(m, i, depth, seed);
        for (int k = 0; k < depth; ++k) levels[k] = m.digits()[idx[k]];
        out.push_back(point_from_digits(m.base(), levels));
    }
    return out;
}

}  // namespace slicefourier
