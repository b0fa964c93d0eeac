#pragma once

// Canonical scenarios and the causal-structure witness.

#include <string_view>
#include <utility>

#include "weaklab/simulator.hpp"

namespace weaklab {

/// |psi_j> = 1/2 |0> - (-1)^j sqrt(3)/2 |1>, j = 1, 2.
PureState illustrative_ket(int j);

/// |0><0| followed by the projectors onto |psi_1>, |psi_2>; no post-selection.
Scenario build_illustrative(double sigma1, double sigma2);

/// |0><0| followed by sigma_y then sigma_x; no post-selection.
Scenario build_pauli_xy(double sigma1, double sigma2);

/// |a_j> = cos(j pi / (n+1)) |0> + sin(j pi / (n+1)) |1>.
PureState chain_ket(int j, int n);

/// |0><0| followed by the n projectors onto |a_j>, all with width sigma.
Scenario build_projector_chain(int n, double sigma);

/// Bipartite state measured by A (x) 1 and then 1 (x) B.
Scenario build_common_cause(const PureState& psi_ab, const Observable& a, const Observable& b,
                            double sigma1, double sigma2);

enum class CausalVerdictKind { DirectCauseWitnessed, Inconclusive };

std::string_view to_string(CausalVerdictKind kind);

struct CausalVerdict {
    CausalVerdictKind verdict;
    double moment;
    std::pair<double, double> hull;
};

/// DirectCauseWitnessed iff the moment lies outside the hull by more than
/// margin. A moment inside the hull never certifies a common cause.
CausalVerdict causal_witness(double moment, std::pair<double, double> hull, double margin);

}  // namespace weaklab
