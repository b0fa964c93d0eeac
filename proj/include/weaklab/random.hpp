#pragma once

// Seeded generators for random states and observables.

#include <random>

#include "weaklab/qm_core.hpp"

namespace weaklab::random {

using Rng = std::mt19937_64;

CVector gaussian_vector(Eigen::Index d, Rng& rng);
PureState pure_state(Eigen::Index d, Rng& rng);
/// Random mixture of `rank` random pure states (rank clipped to d).
MixedState mixed_state(Eigen::Index d, Eigen::Index rank, Rng& rng);
/// Random unitary from the QR decomposition of a Gaussian matrix.
CMatrix unitary(Eigen::Index d, Rng& rng);
/// Hermitian matrix with i.i.d. eigenvalues uniform in [lo, hi] and a random eigenbasis.
Observable hermitian(Eigen::Index d, double lo, double hi, Rng& rng);
/// Projector onto a random subspace of the given rank.
Observable projector(Eigen::Index d, Eigen::Index rank, Rng& rng);

}  // namespace weaklab::random
