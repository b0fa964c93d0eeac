#pragma once

// Multi-start derivative-free search for the most anomalous no-post-selection
// quantities over a pure initial state and a sequence of rank-1 projectors.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "weaklab/qm_core.hpp"

namespace weaklab {

/// Each pure state in dimension d is encoded by 2(d-1) reals: d-1
/// hyperspherical angles for the moduli followed by d-1 relative phases.
struct SearchSpacePoint {
    std::vector<double> state_params;
    std::vector<std::vector<double>> projector_params;

    std::vector<double> flatten() const;
    static SearchSpacePoint unflatten(std::span<const double> flat, int n, int d);
};

std::size_t params_per_state(int d);

CVector decode_amplitudes(std::span<const double> params, int d);
PureState decode_state(std::span<const double> params, int d);

/// Parameters reproducing the given state (inverse of decode_state up to a
/// global phase).
std::vector<double> encode_state(const PureState& state);

enum class OptimizerObjective {
    PointerProduct,       // weak-limit all-position moment (nested anti-commutator)
    WeakValueReal,        // Re <psi| A_n ... A_1 |psi>
    ExactPointerProduct,  // finite-width exact all-position moment
};

std::string_view to_string(OptimizerObjective objective);

struct OptimizerConfig {
    int n = 2;
    int d = 2;
    int restarts = 1;
    std::uint64_t seed = 0;
    std::int64_t budget = 20000;  // objective evaluations per restart
    OptimizerObjective objective = OptimizerObjective::PointerProduct;
    double exact_sigma = 10.0;    // pointer width for ExactPointerProduct
    std::optional<SearchSpacePoint> start;  // replaces the random start of restart 0
    double initial_step = 0.5;
    double diameter_tol = 1e-10;
    unsigned threads = 0;  // 0: WEAKLAB_THREADS or hardware concurrency
};

struct OptimizationResult {
    double best_value;
    SearchSpacePoint best_point;
    std::int64_t evaluations;
    int restarts_used;
    std::vector<std::pair<int, double>> trace;  // (restart index, converged value)
};

double evaluate_objective(OptimizerObjective objective, const SearchSpacePoint& point, int d,
                          double exact_sigma = 10.0);

/// Results are identical for serial and parallel execution.
OptimizationResult minimize(const OptimizerConfig& config);

OptimizationResult minimize_pointer_product(int n, int d, int restarts, std::uint64_t seed, std::int64_t budget);
OptimizationResult minimize_weak_value_real(int n, int d, int restarts, std::uint64_t seed, std::int64_t budget);

/// Worker count: WEAKLAB_THREADS if set (>= 1), else hardware concurrency.
unsigned default_worker_count();

}  // namespace weaklab
