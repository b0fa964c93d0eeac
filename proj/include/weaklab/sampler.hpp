#pragma once

// Monte-Carlo sampling of joint pointer readouts from the exact pointer
// position density of a scenario.
//
// The no-post-selection density is a signed mixture of Gaussian products,
//     p(x) = sum_t w_t prod_j N(x_j; m_tj, sigma_j^2),
// with centers m_tj = (a_k + a_l) / 2. Samples are drawn by rejection against
// the envelope sum_t |w_t| N_t(x), whose mass C = sum_t |w_t| bounds p / q
// for the normalized envelope q. When C exceeds the configured limit the
// sampler falls back to sequential grid inverse-CDF draws. Post-selection is
// simulated by retaining each run with probability p_E(x) / p_1(x).

#include <cstdint>
#include <vector>

#include "weaklab/simulator.hpp"

namespace weaklab {

struct SamplerOptions {
    double max_envelope_constant = 1e4;
    std::size_t max_terms = std::size_t{1} << 20;
    std::size_t grid_points = 4097;
    double grid_half_width = 10.0;  // in units of sigma
};

struct SampleStatistics {
    std::uint64_t shots = 0;       // runs simulated
    std::uint64_t proposals = 0;   // envelope draws (rejection path)
    std::uint64_t retained = 0;    // runs kept after post-selection
    double envelope_constant = 0;  // C
    std::size_t mixture_terms = 0;
    bool grid_fallback = false;

    double acceptance_rate() const { return proposals ? double(shots) / double(proposals) : 0.0; }
    double retention_rate() const { return shots ? double(retained) / double(shots) : 0.0; }
};

struct SampleSet {
    std::vector<std::vector<double>> positions;  // one tuple per retained run
    SampleStatistics stats;
};

/// One Gaussian-product component of the pointer density.
struct MixtureTerm {
    std::vector<double> centers;
    double weight_unselected;  // coefficient in the E = 1 density (sums to 1)
    double weight_selected;    // coefficient in the post-selected, unnormalized density
};

/// Throws ScenarioTooLarge when the term count exceeds opts.max_terms.
std::vector<MixtureTerm> pointer_density_terms(const Scenario& scn, const SamplerOptions& opts = {});

/// Exact joint pointer-position density Tr(eta |x><x|) / Tr(eta).
double pointer_density(const Scenario& scn, std::span<const double> x);

SampleSet sample_outcomes(const Scenario& scn, std::uint64_t shots, std::uint64_t seed,
                          const SamplerOptions& opts = {});

struct SampleSummary {
    double mean;
    double standard_error;
    std::size_t count;
};

/// Mean and standard error of the product of the readouts selected by the
/// pattern (Identity slots contribute 1, Position the coordinate, and
/// PositionSquared its square). Momentum kinds are rejected.
SampleSummary summarize_product(const SampleSet& samples, const MomentPattern& pattern);

}  // namespace weaklab
