#include "weaklab/qm_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace weaklab {

namespace {

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        std::ostringstream os;
        os << what << " must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw Error(ErrorCode::InvalidDimensions, os.str());
    }
}

void require_hermitian(const CMatrix& m, const char* what) {
    require_square(m, what);
    const double defect = hermiticity_defect(m);
    if (!(defect <= kHermitianTol)) {
        std::ostringstream os;
        os << what << " is not Hermitian (max |A - A^dagger| = " << defect << ")";
        throw Error(ErrorCode::NonHermitianInput, os.str());
    }
}

// Symmetrize exactly so the eigensolver sees a Hermitian matrix even when the
// input carries sub-tolerance noise.
CMatrix symmetrized(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

double hermiticity_defect(const CMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    if (m.size() == 0) return 0.0;
    if (!m.allFinite()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- PureState

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 2) {
        throw Error(ErrorCode::InvalidDimensions, "pure state dimension must be at least 2");
    }
    const double norm = amplitudes_.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTol) {
        std::ostringstream os;
        os << "ket norm is " << norm << ", expected 1";
        throw Error(ErrorCode::UnnormalizedKet, os.str());
    }
}

PureState PureState::normalized(CVector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorCode::UnnormalizedKet, "cannot normalize a zero or non-finite ket");
    }
    return PureState(amplitudes / norm);
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim) {
        throw Error(ErrorCode::InvalidArgument, "basis index out of range");
    }
    CVector v = CVector::Zero(dim);
    v(index) = 1.0;
    return PureState(std::move(v));
}

// --------------------------------------------------------------- MixedState

MixedState::MixedState(CMatrix matrix) : matrix_(std::move(matrix)) {
    require_hermitian(matrix_, "density matrix");
    if (matrix_.rows() < 2) {
        throw Error(ErrorCode::InvalidDimensions, "density matrix dimension must be at least 2");
    }
    const double trace = matrix_.trace().real();
    if (std::abs(trace - 1.0) > kNormTol) {
        std::ostringstream os;
        os << "density matrix trace is " << trace << ", expected 1";
        throw Error(ErrorCode::InvalidState, os.str());
    }
    const SpectralDecomposition sd = spectral_decompose(matrix_);
    if (sd.eigenvalues(0) < -kHermitianTol) {
        std::ostringstream os;
        os << "density matrix has negative eigenvalue " << sd.eigenvalues(0);
        throw Error(ErrorCode::InvalidState, os.str());
    }
}

MixedState::MixedState(const PureState& pure) : matrix_(pure.density()) {}

bool MixedState::is_pure(double tol) const {
    const double purity = (matrix_ * matrix_).trace().real();
    return std::abs(purity - 1.0) <= tol;
}

// --------------------------------------------------------------- Observable

CMatrix SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Observable::Observable(CMatrix matrix)
    : matrix_(std::move(matrix)), cache_(std::make_shared<Cache>()) {
    require_hermitian(matrix_, "observable");
}

const SpectralDecomposition& Observable::decomposition() const {
    std::call_once(cache_->once, [this] { cache_->value = spectral_decompose(matrix_); });
    return cache_->value;
}

std::vector<SpectralProjector> Observable::spectral_projectors(double tol) const {
    const SpectralDecomposition& sd = decomposition();
    std::vector<SpectralProjector> out;
    const Eigen::Index d = sd.eigenvalues.size();
    Eigen::Index start = 0;
    while (start < d) {
        Eigen::Index end = start + 1;
        while (end < d && sd.eigenvalues(end) - sd.eigenvalues(start) <= tol) ++end;
        const auto block = sd.eigenvectors.middleCols(start, end - start);
        const double mean = sd.eigenvalues.segment(start, end - start).mean();
        out.push_back({mean, block * block.adjoint()});
        start = end;
    }
    return out;
}

Observable Observable::identity(Eigen::Index dim) { return Observable(CMatrix::Identity(dim, dim)); }

// -------------------------------------------------------------- PovmElement

PovmElement::PovmElement(CMatrix matrix) : matrix_(std::move(matrix)) {
    require_hermitian(matrix_, "POVM element");
    const SpectralDecomposition sd = spectral_decompose(matrix_);
    const double lo = sd.eigenvalues(0);
    const double hi = sd.eigenvalues(sd.eigenvalues.size() - 1);
    if (lo < -kHermitianTol || hi > 1.0 + kHermitianTol) {
        std::ostringstream os;
        os << "POVM element spectrum [" << lo << ", " << hi << "] not inside [0, 1]";
        throw Error(ErrorCode::InvalidPovm, os.str());
    }
}

PovmElement::PovmElement(const Observable& projector) : PovmElement(projector.matrix()) {}

// --------------------------------------------------------------- operations

SpectralDecomposition spectral_decompose(const CMatrix& hermitian) {
    require_hermitian(hermitian, "matrix");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetrized(hermitian));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NumericFailure, "eigensolver did not converge");
    }
    SpectralDecomposition sd{solver.eigenvalues(), solver.eigenvectors()};
    // Canonical phase: the largest-magnitude component (first on ties) of each
    // eigenvector is made real and positive.
    for (Eigen::Index k = 0; k < sd.eigenvectors.cols(); ++k) {
        auto col = sd.eigenvectors.col(k);
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            const double mag = std::abs(col(i));
            if (mag > best + 1e-12) {
                best = mag;
                pivot = i;
            }
        }
        const Complex phase = col(pivot) / std::abs(col(pivot));
        col /= phase;
        col(pivot) = Complex(col(pivot).real(), 0.0);
    }
    return sd;
}

SpectralDecomposition spectral_decompose(const Observable& obs) { return obs.decomposition(); }

double spectral_norm(const Observable& obs) {
    const RVector& ev = obs.decomposition().eigenvalues;
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

std::pair<double, double> spectrum_hull(std::span<const Observable> observables) {
    if (observables.empty()) {
        throw Error(ErrorCode::EmptyList, "spectrum_hull needs at least one observable");
    }
    double lo = 1.0;
    double hi = 1.0;
    for (const Observable& obs : observables) {
        const RVector& ev = obs.decomposition().eigenvalues;
        const double a = ev(0);
        const double b = ev(ev.size() - 1);
        const double c[4] = {lo * a, lo * b, hi * a, hi * b};
        lo = *std::min_element(c, c + 4);
        hi = *std::max_element(c, c + 4);
    }
    return {lo, hi};
}

Observable projector_from_ket(const PureState& ket) { return Observable(ket.density()); }

bool is_projector(const Observable& obs, double tol) {
    const CMatrix& p = obs.matrix();
    return (p * p - p).cwiseAbs().maxCoeff() <= tol;
}

Observable tensor(const Observable& a, const Observable& b) { return Observable(kron(a.matrix(), b.matrix())); }

MixedState tensor(const MixedState& a, const MixedState& b) { return MixedState(kron(a.matrix(), b.matrix())); }

PureState tensor(const PureState& a, const PureState& b) {
    CVector out(a.dimension() * b.dimension());
    for (Eigen::Index i = 0; i < a.dimension(); ++i) {
        out.segment(i * b.dimension(), b.dimension()) = a.amplitudes()(i) * b.amplitudes();
    }
    return PureState::normalized(std::move(out));
}

bool commutes(const Observable& a, const Observable& b, double tol) {
    if (a.dimension() != b.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "commutes: observables have different dimensions");
    }
    const CMatrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    const double norm = Eigen::JacobiSVD<CMatrix>(c).singularValues()(0);
    return norm <= tol;
}

namespace pauli {

Observable x() {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return Observable(m);
}

Observable y() {
    CMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return Observable(m);
}

Observable z() {
    CMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return Observable(m);
}

}  // namespace pauli

}  // namespace weaklab
