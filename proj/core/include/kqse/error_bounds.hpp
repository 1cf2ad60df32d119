#pragma once

#include <cstddef>
#include <span>

namespace kqse {

// |phi(mu)| <= C exp(-tau mu); beta governs the Gaussian tail of phi1 phi2*.
struct ErrorBoundParams {
  double C = 1.0;
  double tau = 0.5;
  double beta = 0.25;
  double M = 1.0;
};

// (C / 2 pi) exp(-tau mu_max)
double truncation_bound(const ErrorBoundParams& p, double mu_max);
// (M / pi) q / (1 - q), q = exp(-2 pi tau / dmu), dmu = 2 mu_max / N_mu; +inf for tau <= 0.
double discretization_bound(const ErrorBoundParams& p, std::size_t n_mu, double mu_max);
// Bound on the squared estimation error: mu_max^2 / (pi^2 n).
double estimation_bound(double mu_max, std::size_t n);
// 3 (trunc^2 + dis^2 + estimation_bound)
double total_bound(const ErrorBoundParams& p, double mu_max, std::size_t n_mu, std::size_t n);
// exp(-4 beta min(mu_max^2, nu_max^2))
double overlap_truncation_bound(double beta, double mu_max, double nu_max);

struct DecayFit {
  double rate = 0.0;       // tau (or beta for a quadratic fit)
  double log_prefactor = 0.0;
  std::size_t points = 0;
};

// Least squares of log|phi| = c - tau |mu| over nodes with |mu| >= (2/3) max |mu|.
DecayFit fit_tau(std::span<const double> mu, std::span<const double> abs_phi);
// Least squares of log|phi1 phi2*| = c - 4 beta mu^2 over the same outer third.
DecayFit fit_beta(std::span<const double> mu, std::span<const double> abs_product);

}  // namespace kqse
