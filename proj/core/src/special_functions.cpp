#include "kqse/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kqse/errors.hpp"

namespace kqse {
namespace {

void check_order(int m) {
  if (m < 0 || m > kMaxPolynomialOrder) {
    throw UnsupportedOrderError("polynomial order " + std::to_string(m) +
                                " outside supported range [0, " +
                                std::to_string(kMaxPolynomialOrder) + "]");
  }
}

using cld = std::complex<long double>;

// erf(z) = 2/sqrt(pi) sum_k (-1)^k z^{2k+1} / (k! (2k+1))
std::complex<double> erf_series(std::complex<double> z) {
  const cld zl(z.real(), z.imag());
  const cld z2 = zl * zl;
  cld power = zl;  // (-1)^k z^{2k+1} / k!
  cld sum = zl;
  for (int k = 1; k < 4000; ++k) {
    power *= -z2 / static_cast<long double>(k);
    const cld term = power / static_cast<long double>(2 * k + 1);
    sum += term;
    if (std::abs(term) <= 1e-21L * std::abs(sum)) break;
  }
  const long double scale = 2.0L / std::sqrt(std::numbers::pi_v<long double>);
  const cld r = scale * sum;
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

// sqrt(pi) e^{z^2} erfc(z) = 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))),
// evaluated with the modified Lentz algorithm. Requires Re z > 0.
std::complex<double> erfc_continued_fraction(std::complex<double> z) {
  const cld zl(z.real(), z.imag());
  constexpr long double tiny = 1e-300L;
  cld f = zl;
  cld c = f;
  cld d = 0.0L;
  for (int k = 1; k < 20000; ++k) {
    const long double a = 0.5L * static_cast<long double>(k);
    d = zl + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = zl + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const cld delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0L) < 1e-19L) break;
  }
  const cld r = std::exp(-zl * zl) / (std::sqrt(std::numbers::pi_v<long double>) * f);
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

}  // namespace

double hermite(int m, double y) {
  check_order(m);
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * y;
  for (int k = 1; k < m; ++k) {
    const double next = 2.0 * y * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre(int m, double x) {
  check_order(m);
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_function(int m, double y) {
  check_order(m);
  const double psi0 = std::exp(-0.5 * y * y) / std::sqrt(std::sqrt(std::numbers::pi));
  if (m == 0) return psi0;
  double prev = psi0;
  double cur = std::sqrt(2.0) * y * psi0;
  for (int k = 2; k <= m; ++k) {
    const double next =
        std::sqrt(2.0 / k) * y * cur - std::sqrt((k - 1.0) / k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::complex<double> erfc(std::complex<double> z) {
  if (z.real() < 0.0) return 2.0 - erfc(-z);
  if (z.real() < 2.0) return 1.0 - erf_series(z);
  return erfc_continued_fraction(z);
}

}  // namespace kqse
