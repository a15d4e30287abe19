// Randomized property suites behind `nhkr selftest`: transform identities,
// adjoint correctness, rescaling invariance and the FOTOC pair identities.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nhkr/core.hpp"

namespace nhkr {

struct PropertyResult
{
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst = 0.0;       // largest observed deviation
    double tolerance = 0.0;

    bool passed() const { return failures == 0; }
};

/// Complex Gaussian amplitudes on a grid of n points with unit discrete norm and log_norm 0.
AngleStated random_state(std::mt19937_64& rng, Eigen::Index n);

/// Runs every property `cases` times with states and parameters drawn from seed.
std::vector<PropertyResult> run_property_suite(std::size_t cases, std::uint64_t seed);

} // namespace nhkr
