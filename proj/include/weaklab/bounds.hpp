#pragma once

// Randomized checks of the no-post-selection bounds: the -1/8 bound for
// projector pairs, the norm-product bound for sequences, and the spectrum
// hull for commuting sequences.

#include <cstdint>
#include <string>
#include <vector>

namespace weaklab {

struct BoundSuiteReport {
    std::string name;
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    double worst_value = 0.0;   // most extreme checked quantity
    double worst_margin = 0.0;  // smallest (bound - quantity); negative means violated
};

/// Re <psi|B A|psi> >= -1/8 - 1e-12 over random projector pairs in d = 2, 3.
BoundSuiteReport projector_pair_suite(std::uint64_t trials, std::uint64_t seed);

/// |Tr(A_n ... A_1 rho)| <= prod ||A_j|| + 1e-12 over random sequences with
/// n <= 5, d <= 4 and random (pure or mixed) states.
BoundSuiteReport norm_product_suite(std::uint64_t trials, std::uint64_t seed);

/// Re Tr(A_n ... A_1 rho) inside the spectrum hull (1e-12) for random
/// pairwise-commuting sequences.
BoundSuiteReport commuting_hull_suite(std::uint64_t trials, std::uint64_t seed);

}  // namespace weaklab
