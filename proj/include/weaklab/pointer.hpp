#pragma once

// Closed-form Gaussian pointer algebra in units where hbar = 1 and the
// coupling g = gamma * dt = 1, so eigenvalues and pointer positions share one
// scale and the measurement strength is set by the width alone.

#include <complex>
#include <span>
#include <string_view>

#include "weaklab/error.hpp"

namespace weaklab {

class GaussianPointer {
public:
    /// Throws InvalidArgument unless sigma is finite and > 0.
    explicit GaussianPointer(double sigma);

    double sigma() const noexcept { return sigma_; }

private:
    double sigma_;
};

enum class PointerOperatorKind { Identity, Position, PositionSquared, Momentum, MomentumSquared };

/// Single-letter code used in moment patterns: i, x, X, p, P.
char pattern_code(PointerOperatorKind kind);
PointerOperatorKind kind_from_code(char code);
std::string_view to_string(PointerOperatorKind kind);

/// phi(x) = (2 pi sigma^2)^(-1/4) exp(-(x - center)^2 / (4 sigma^2)).
std::complex<double> wavefunction(const GaussianPointer& ptr, double center, double x);

/// <phi(left_center)| O |phi(right_center)> for the pointer operator O.
/// Swapping the centers conjugates the result.
std::complex<double> matrix_element(const GaussianPointer& ptr, PointerOperatorKind kind,
                                    double left_center, double right_center);

/// Norm of exp(-i shift p)|phi(0)>: exp(Im(shift)^2 / (4 sigma^2)).
double displaced_norm(const GaussianPointer& ptr, std::complex<double> shift);

/// Squared norm of |phi(a)> - (1 - i a p)|phi(0)>, the error of the
/// first-order expansion of the coupling for eigenvalue a.
double linearization_error(const GaussianPointer& ptr, double eigenvalue);

inline constexpr double kDefaultWeakRatio = 10.0;

/// sigma >= ratio * max|a_k| and sigma >= ratio * wv_magnitude (inclusive).
bool weak_regime_check(const GaussianPointer& ptr, std::span<const double> eigenvalues,
                       double wv_magnitude, double ratio = kDefaultWeakRatio);

}  // namespace weaklab
