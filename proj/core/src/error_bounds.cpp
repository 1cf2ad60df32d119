#include "kqse/error_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "kqse/errors.hpp"
#include "kqse/stats.hpp"

namespace kqse {

double truncation_bound(const ErrorBoundParams& p, double mu_max) {
  if (std::isinf(mu_max)) return 0.0;
  return p.C / (2.0 * std::numbers::pi) * std::exp(-p.tau * mu_max);
}

double discretization_bound(const ErrorBoundParams& p, std::size_t n_mu, double mu_max) {
  if (p.tau <= 0.0) return std::numeric_limits<double>::infinity();
  if (n_mu == 0 || !(mu_max > 0.0)) throw ConfigError("discretization bound needs N_mu, mu_max > 0");
  const double dmu = 2.0 * mu_max / static_cast<double>(n_mu);
  const double q = std::exp(-2.0 * std::numbers::pi * p.tau / dmu);
  return p.M / std::numbers::pi * q / (1.0 - q);
}

double estimation_bound(double mu_max, std::size_t n) {
  if (n == 0) throw ConfigError("estimation bound needs n >= 1");
  return mu_max * mu_max / (std::numbers::pi * std::numbers::pi * static_cast<double>(n));
}

double total_bound(const ErrorBoundParams& p, double mu_max, std::size_t n_mu, std::size_t n) {
  const double t = truncation_bound(p, mu_max);
  const double d = discretization_bound(p, n_mu, mu_max);
  return 3.0 * (t * t + d * d + estimation_bound(mu_max, n));
}

double overlap_truncation_bound(double beta, double mu_max, double nu_max) {
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  const double m = std::min(mu_max * mu_max, nu_max * nu_max);
  return std::exp(-4.0 * beta * m);
}

namespace {

DecayFit fit_outer(std::span<const double> mu, std::span<const double> mag, bool quadratic) {
  if (mu.size() != mag.size()) throw ConfigError("decay fit needs paired inputs");
  double reach = 0.0;
  for (double m : mu) reach = std::max(reach, std::abs(m));
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double a = std::abs(mu[i]);
    if (a + 1e-12 < 2.0 / 3.0 * reach || !(mag[i] > 0.0)) continue;
    xs.push_back(quadratic ? a * a : a);
    ys.push_back(std::log(mag[i]));
  }
  if (xs.size() < 3) throw ConfigError("decay fit needs at least 3 usable outer nodes");
  const auto f = fit_line(xs, ys);
  DecayFit out;
  out.rate = quadratic ? -f.slope / 4.0 : -f.slope;
  out.log_prefactor = f.intercept;
  out.points = xs.size();
  return out;
}

}  // namespace

DecayFit fit_tau(std::span<const double> mu, std::span<const double> abs_phi) {
  return fit_outer(mu, abs_phi, false);
}

DecayFit fit_beta(std::span<const double> mu, std::span<const double> abs_product) {
  return fit_outer(mu, abs_product, true);
}

}  // namespace kqse
