#include "weaklab/random.hpp"

#include <algorithm>

#include <Eigen/QR>

namespace weaklab::random {

CVector gaussian_vector(Eigen::Index d, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

PureState pure_state(Eigen::Index d, Rng& rng) { return PureState::normalized(gaussian_vector(d, rng)); }

MixedState mixed_state(Eigen::Index d, Eigen::Index rank, Rng& rng) {
    rank = std::clamp<Eigen::Index>(rank, 1, d);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    CMatrix rho = CMatrix::Zero(d, d);
    double total = 0.0;
    for (Eigen::Index r = 0; r < rank; ++r) {
        const double w = unif(rng) + 1e-3;
        rho += w * pure_state(d, rng).density();
        total += w;
    }
    rho /= total;
    return MixedState((rho + rho.adjoint()) * 0.5);
}

CMatrix unitary(Eigen::Index d, Rng& rng) {
    CMatrix g(d, d);
    for (Eigen::Index c = 0; c < d; ++c) g.col(c) = gaussian_vector(d, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        const Complex diag = r(i, i);
        if (std::abs(diag) > 0.0) q.col(i) *= diag / std::abs(diag);
    }
    return q;
}

Observable hermitian(Eigen::Index d, double lo, double hi, Rng& rng) {
    std::uniform_real_distribution<double> unif(lo, hi);
    RVector ev(d);
    for (Eigen::Index i = 0; i < d; ++i) ev(i) = unif(rng);
    const CMatrix u = unitary(d, rng);
    const CMatrix m = u * ev.cast<Complex>().asDiagonal() * u.adjoint();
    return Observable((m + m.adjoint()) * 0.5);
}

Observable projector(Eigen::Index d, Eigen::Index rank, Rng& rng) {
    const CMatrix u = unitary(d, rng);
    const auto cols = u.leftCols(rank);
    const CMatrix p = cols * cols.adjoint();
    return Observable((p + p.adjoint()) * 0.5);
}

}  // namespace weaklab::random
