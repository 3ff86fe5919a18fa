#pragma once

#include <cstdint>
#include <string>

#include "slicefourier/expansion.hpp"
#include "slicefourier/io.hpp"

namespace slicefourier {

struct VerifyOptions {
    std::uint64_t seed = 0;
    int threads = 1;
    QuadratureSpec quadrature = prefix_exact(8);
};

// Seeded trig poly with `terms` frequencies in [-max_freq, max_freq]^dim.
TrigPoly random_trig_poly(int dim, int terms, int max_freq, std::uint64_t seed, std::uint64_t stream = 0);

// suite: measure | kaczmarz | expansion | transforms | classify | all.
// {"suite":..., "pass":bool, "checks":[{"name","value","tolerance","pass"},..]}
Json verify_suite(const Measure& m, const std::string& suite, const VerifyOptions& opts = {});

}  // namespace slicefourier
