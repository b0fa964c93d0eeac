#pragma once

// Finite-dimensional Hilbert-space algebra: states, observables, POVM
// elements, spectral decomposition and tensor products.
//
// All value types validate their invariants on construction and are
// immutable afterwards, so they can be shared freely between threads.

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "weaklab/error.hpp"

namespace weaklab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kProjectorTol = 1e-10;

/// Largest absolute entry of A - A^dagger.
double hermiticity_defect(const CMatrix& m);

class PureState {
public:
    /// Throws UnnormalizedKet if |amplitudes| deviates from 1 by more than 1e-12,
    /// InvalidDimensions if d < 2.
    explicit PureState(CVector amplitudes);

    /// Rescales to unit norm first. Throws UnnormalizedKet on a zero vector.
    static PureState normalized(CVector amplitudes);

    /// Computational basis vector |index> in dimension dim.
    static PureState basis(Eigen::Index dim, Eigen::Index index);

    const CVector& amplitudes() const noexcept { return amplitudes_; }
    Eigen::Index dimension() const noexcept { return amplitudes_.size(); }
    CMatrix density() const { return amplitudes_ * amplitudes_.adjoint(); }

private:
    CVector amplitudes_;
};

class MixedState {
public:
    /// Hermitian within 1e-12, eigenvalues >= -1e-12, unit trace within 1e-12.
    explicit MixedState(CMatrix matrix);
    explicit MixedState(const PureState& pure);

    const CMatrix& matrix() const noexcept { return matrix_; }
    Eigen::Index dimension() const noexcept { return matrix_.rows(); }

    /// Tr(rho^2) == 1 within tol.
    bool is_pure(double tol = 1e-10) const;

private:
    CMatrix matrix_;
};

struct SpectralDecomposition {
    RVector eigenvalues;   // ascending
    CMatrix eigenvectors;  // column k belongs to eigenvalues[k]

    CMatrix reconstruct() const;
};

/// A spectral projector together with its (distinct) eigenvalue.
struct SpectralProjector {
    double eigenvalue;
    CMatrix projector;
};

class Observable {
public:
    /// Throws NonHermitianInput when the matrix is not Hermitian within 1e-12.
    explicit Observable(CMatrix matrix);

    const CMatrix& matrix() const noexcept { return matrix_; }
    Eigen::Index dimension() const noexcept { return matrix_.rows(); }

    /// Computed on first use and shared between copies.
    const SpectralDecomposition& decomposition() const;

    /// Eigenvalues grouped into distinct values (within tol) with their projectors.
    std::vector<SpectralProjector> spectral_projectors(double tol = 1e-10) const;

    static Observable identity(Eigen::Index dim);

private:
    struct Cache {
        std::once_flag once;
        SpectralDecomposition value;
    };

    CMatrix matrix_;
    std::shared_ptr<Cache> cache_;
};

class PovmElement {
public:
    /// Hermitian within 1e-12 with spectrum inside [-1e-12, 1 + 1e-12].
    explicit PovmElement(CMatrix matrix);
    explicit PovmElement(const Observable& projector);

    const CMatrix& matrix() const noexcept { return matrix_; }
    Eigen::Index dimension() const noexcept { return matrix_.rows(); }

private:
    CMatrix matrix_;
};

SpectralDecomposition spectral_decompose(const Observable& obs);
SpectralDecomposition spectral_decompose(const CMatrix& hermitian);

/// max_k |lambda_k|.
double spectral_norm(const Observable& obs);

/// (min, max) over all products of one eigenvalue per observable.
std::pair<double, double> spectrum_hull(std::span<const Observable> observables);

/// |psi><psi|.
Observable projector_from_ket(const PureState& ket);

/// True when ||P^2 - P|| (max entry) <= tol.
bool is_projector(const Observable& obs, double tol = kProjectorTol);

Observable tensor(const Observable& a, const Observable& b);
MixedState tensor(const MixedState& a, const MixedState& b);
PureState tensor(const PureState& a, const PureState& b);

/// ||AB - BA|| <= tol in the spectral norm.
bool commutes(const Observable& a, const Observable& b, double tol);

namespace pauli {
Observable x();
Observable y();
Observable z();
}  // namespace pauli

}  // namespace weaklab
