#include "weaklab/pointer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace weaklab {

GaussianPointer::GaussianPointer(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::InvalidArgument, "pointer width sigma must be finite and > 0, got " +
                                                    std::to_string(sigma));
    }
}

char pattern_code(PointerOperatorKind kind) {
    switch (kind) {
        case PointerOperatorKind::Identity: return 'i';
        case PointerOperatorKind::Position: return 'x';
        case PointerOperatorKind::PositionSquared: return 'X';
        case PointerOperatorKind::Momentum: return 'p';
        case PointerOperatorKind::MomentumSquared: return 'P';
    }
    return '?';
}

PointerOperatorKind kind_from_code(char code) {
    switch (code) {
        case 'i': return PointerOperatorKind::Identity;
        case 'x': return PointerOperatorKind::Position;
        case 'X': return PointerOperatorKind::PositionSquared;
        case 'p': return PointerOperatorKind::Momentum;
        case 'P': return PointerOperatorKind::MomentumSquared;
        default:
            throw Error(ErrorCode::ParseError,
                        std::string("unknown pointer operator code '") + code + "' (expected one of i x X p P)");
    }
}

std::string_view to_string(PointerOperatorKind kind) {
    switch (kind) {
        case PointerOperatorKind::Identity: return "Identity";
        case PointerOperatorKind::Position: return "Position";
        case PointerOperatorKind::PositionSquared: return "PositionSquared";
        case PointerOperatorKind::Momentum: return "Momentum";
        case PointerOperatorKind::MomentumSquared: return "MomentumSquared";
    }
    return "Unknown";
}

std::complex<double> wavefunction(const GaussianPointer& ptr, double center, double x) {
    const double s2 = ptr.sigma() * ptr.sigma();
    const double u = x - center;
    return std::pow(2.0 * std::numbers::pi * s2, -0.25) * std::exp(-u * u / (4.0 * s2));
}

std::complex<double> matrix_element(const GaussianPointer& ptr, PointerOperatorKind kind,
                                    double left_center, double right_center) {
    const double s2 = ptr.sigma() * ptr.sigma();
    const double diff = right_center - left_center;
    const double mid = 0.5 * (right_center + left_center);
    const double overlap = std::exp(-diff * diff / (8.0 * s2));
    switch (kind) {
        case PointerOperatorKind::Identity:
            return overlap;
        case PointerOperatorKind::Position:
            return mid * overlap;
        case PointerOperatorKind::PositionSquared:
            return (s2 + mid * mid) * overlap;
        case PointerOperatorKind::Momentum:
            // (1 / 2 sigma^2) (a_k - a_l) / (2i)
            return {0.0, -diff / (4.0 * s2) * overlap};
        case PointerOperatorKind::MomentumSquared:
            return (s2 - 0.25 * diff * diff) / (4.0 * s2 * s2) * overlap;
    }
    return 0.0;
}

double displaced_norm(const GaussianPointer& ptr, std::complex<double> shift) {
    const double im = shift.imag();
    return std::exp(im * im / (4.0 * ptr.sigma() * ptr.sigma()));
}

double linearization_error(const GaussianPointer& ptr, double eigenvalue) {
    const double r2 = eigenvalue * eigenvalue / (ptr.sigma() * ptr.sigma());
    if (r2 < 1e-4) {
        // Series in r2 to avoid cancellation: 3/64 r^4 - 5/1536 r^6 + 7/49152 r^8.
        return r2 * r2 * (3.0 / 64.0 - r2 * (5.0 / 1536.0 - r2 * (7.0 / 49152.0)));
    }
    const double e = std::exp(-r2 / 8.0);
    return 2.0 * (1.0 - e) + 0.25 * r2 * (1.0 - 2.0 * e);
}

bool weak_regime_check(const GaussianPointer& ptr, std::span<const double> eigenvalues,
                       double wv_magnitude, double ratio) {
    if (!(ratio > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "weak-regime ratio must be > 0");
    }
    double largest = 0.0;
    for (double a : eigenvalues) largest = std::max(largest, std::abs(a));
    return ptr.sigma() >= ratio * largest && ptr.sigma() >= ratio * std::abs(wv_magnitude);
}

}  // namespace weaklab
