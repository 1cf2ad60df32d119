#pragma once

#include <complex>

namespace kqse {

inline constexpr int kMaxPolynomialOrder = 60;

// Physicists' Hermite polynomial H_m(y), three-term recurrence.
// Throws UnsupportedOrderError for m > kMaxPolynomialOrder.
double hermite(int m, double y);

// Laguerre polynomial L_m(x), three-term recurrence.
double laguerre(int m, double x);

// Normalized oscillator eigenfunction psi_m(y) = H_m(y) e^{-y^2/2} / sqrt(2^m m! sqrt(pi)),
// evaluated with the stable normalized recurrence (no factorials).
double hermite_function(int m, double y);

// Complementary error function of a complex argument.
//
// Re z < 0 is reflected through erfc(z) = 2 - erfc(-z). On the right half
// plane a Maclaurin series of erf is used for Re z < 2 (cancellation there is
// bounded by exp(2 Re(z)^2)) and the Laplace continued fraction otherwise.
// Validated to 1e-10 relative error for |z| <= kErfcValidatedRadius.
std::complex<double> erfc(std::complex<double> z);

inline constexpr double kErfcValidatedRadius = 20.0;

}  // namespace kqse
