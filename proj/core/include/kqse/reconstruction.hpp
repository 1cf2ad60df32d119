#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "kqse/kcfe.hpp"
#include "kqse/kde.hpp"
#include "kqse/reference_states.hpp"

namespace kqse {

// phi(1; mu, nu) as a callable, for analytic or mixture states.
using CFFunction = std::function<cplx(double mu, double nu)>;
CFFunction cf_function(const ReferenceState& state);

// Coordinate grid y_i and the truncated mu lattice mu_k = k dmu - mu_max.
struct ReconstructionGrid {
  UniformGrid y{-4.0, 4.0, 17};
  double mu_max = 6.0;
  std::size_t n_mu = 36;

  double dmu() const { return 2.0 * mu_max / static_cast<double>(n_mu); }
  Axis mu_axis() const { return Axis::dft(mu_max, n_mu); }
  // All differences y_i - y_j: 2G - 1 nodes with the y step.
  Axis nu_axis() const;
};

struct DensityKernelGrid {
  UniformGrid y;
  Eigen::MatrixXcd values;  // values(i, j) = rho(y_i, y_j)
  bool tail_corrected = false;

  // max |rho(y, y') - conj(rho(y', y))|
  double hermiticity_violation() const;
};

// rho(y, y') = (dmu / 2 pi) sum_k phi(1; mu_k, y - y') exp(-i mu_k (y + y') / 2),
// plus the ground-state tail beyond |mu| = mu_max when tail is set.
// Throws IncompleteGridError when the CF grid lacks a required node.
DensityKernelGrid reconstruct_rho(const CFGrid& cf, const ReconstructionGrid& grid, bool tail);
DensityKernelGrid reconstruct_rho(const CFFunction& cf, const ReconstructionGrid& grid, bool tail);

DensityKernelGrid analytic_density_grid(const ReferenceState& state, const UniformGrid& y);

struct TailCorrection {
  cplx value;
  // Set when an erfc argument lies beyond the validated radius.
  bool outside_validated_range = false;
};

// (1 / 2 sqrt(pi)) exp(-(y^2 + y'^2) / 2) [erfc((mu_max - i(y + y')) / 2) + erfc((mu_max + i(y + y')) / 2)]
TailCorrection tail_correction(double y, double yp, double mu_max);

// Analytic inputs must leave |Im| <= 0.02 max(|Re|, 1) (NumericalGateError);
// for sampled grids the imaginary part is estimator noise and is dropped.
// The same holds for trace_power_3 and wigner_from_cf.
//
// Both grids estimated: (dmu dnu / 2 pi) sum phi1(mu, nu) phi2(-mu, -nu) * prefactor.
// The lattice must be shared and symmetric. Deconvolved grids take prefactor 1.
double overlap(const CFGrid& cf1, const CFGrid& cf2, double noise_prefactor = 1.0);
// Analytic phi1 against an estimated grid on any lattice.
double overlap(const CFFunction& cf1, const CFGrid& cf2, double noise_prefactor = 1.0);
// Both analytic on a given lattice.
double overlap(const CFFunction& cf1, const CFFunction& cf2, const Axis& mu, const Axis& nu);

// 1 / phi_Y((1 - kappa) / kappa)^power; prefactor for grids that hold Z
// estimates at 1 / kappa without the noise division.
double overlap_noise_prefactor(const NoiseModel& nm, int power);

inline constexpr std::size_t kTrace3TermBudget = 10'000'000;

// tr rho^3 from the four-dimensional lattice sum
// (dmu dnu)^2 / (2 pi)^2 sum phi(x1) phi(x2) conj(phi(x1 + x2)) exp(-(i/2)(mu1 nu2 - nu1 mu2)).
// The grid form needs odd symmetric axes (closed under addition); nodes whose
// sum leaves the lattice contribute zero. Throws TermBudgetError above budget.
double trace_power_3(const CFGrid& cf, std::size_t budget = kTrace3TermBudget);
double trace_power_3(const CFFunction& cf, const Axis& mu, const Axis& nu,
                     std::size_t budget = kTrace3TermBudget);

// sqrt(clip(1 - overlap, 0, 1)).
double trace_distance_pure(double overlap_value);

struct ValidationReport {
  bool hermitian = false;
  bool normalized = false;
  bool positive = false;
  bool normalization_checked = false;
  double hermiticity_violation = 0.0;
  double normalization_violation = 0.0;
  double positivity_violation = 0.0;
  double hermiticity_tolerance = 0.0;
  double normalization_tolerance = 0.0;
  double positivity_tolerance = 0.0;
  std::vector<double> probe_overlaps;
  std::vector<std::string> notes;

  bool passed() const { return hermitian && normalized && positive; }
};

// Hermiticity, normalization at the origin and probe overlaps in [0, 1].
// Tolerances: 1e-10 / 1e-10 / 1e-6 for analytic grids; 5/sqrt(n) / 5/sqrt(n) / 0.03
// for sampled grids. Never throws.
ValidationReport validate_cf_grid(const CFGrid& cf, const std::vector<ReferenceState>& probes);

// W(q, p) = (1 / 4 pi^2) dmu dnu sum phi(1; mu, nu) exp(-i (mu q + nu p)).
double wigner_from_cf(const CFGrid& cf, double q, double p);
double wigner_from_cf(const CFFunction& cf, const Axis& mu, const Axis& nu, double q, double p);

// max over the grid of |rho - rho_hat|^2.
double sup_error(const DensityKernelGrid& est, const Eigen::MatrixXcd& truth);
double sup_error(const DensityKernelGrid& est, const ReferenceState& truth);

}  // namespace kqse
