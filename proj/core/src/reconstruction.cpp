#include "kqse/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kqse/errors.hpp"
#include "kqse/special_functions.hpp"

namespace kqse {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResidueGate = 0.02;

// Sampled grids carry estimator noise in the imaginary part; only exact
// inputs are held to the residue gate.
double gated_real(cplx v, const char* what, bool gate = true) {
  if (gate && std::abs(v.imag()) > kResidueGate * std::max(std::abs(v.real()), 1.0)) {
    throw NumericalGateError(std::string(what) + ": imaginary residue " +
                             std::to_string(v.imag()) + " against real part " +
                             std::to_string(v.real()));
  }
  return v.real();
}

bool is_exact(const CFGrid& g) { return g.source == "analytic"; }

double lattice_cell(const Axis& a) {
  if (a.count < 2) throw GridMismatchError("lattice sums need at least two nodes per axis");
  return a.step;
}

// Sum over the lattice with phi looked up in a grid or evaluated by a function.
template <class Phi>
DensityKernelGrid reconstruct_impl(Phi&& phi, const ReconstructionGrid& grid, bool tail) {
  const std::size_t g = grid.y.points;
  const Axis mu = grid.mu_axis();
  const double weight = grid.dmu() / kTwoPi;
  DensityKernelGrid out;
  out.y = grid.y;
  out.values.resize(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g));
  out.tail_corrected = tail;
  for (std::size_t i = 0; i < g; ++i) {
    const double y = grid.y.at(i);
    for (std::size_t j = 0; j < g; ++j) {
      const double yp = grid.y.at(j);
      const double centre = 0.5 * (y + yp);
      cplx sum = 0.0;
      for (std::size_t k = 0; k < mu.count; ++k) {
        const double m = mu.at(k);
        sum += phi(k, i, j) * std::polar(1.0, -m * centre);
      }
      cplx value = weight * sum;
      if (tail) value += tail_correction(y, yp, grid.mu_max).value;
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return out;
}

}  // namespace

CFFunction cf_function(const ReferenceState& state) {
  return [state](double mu, double nu) { return cf(state, 1.0, {mu, nu}); };
}

Axis ReconstructionGrid::nu_axis() const {
  const double dy = y.step();
  return {-dy * static_cast<double>(y.points - 1), dy, 2 * y.points - 1};
}

double DensityKernelGrid::hermiticity_violation() const {
  return (values - values.adjoint()).cwiseAbs().maxCoeff();
}

DensityKernelGrid reconstruct_rho(const CFGrid& cf, const ReconstructionGrid& grid, bool tail) {
  if (std::abs(cf.t - 1.0) > 1e-12) throw GridMismatchError("reconstruction needs a t = 1 grid");
  const Axis mu = grid.mu_axis();
  const std::size_t g = grid.y.points;
  std::vector<std::size_t> mu_index(mu.count);
  for (std::size_t k = 0; k < mu.count; ++k) {
    const auto idx = cf.mu.find(mu.at(k));
    if (!idx) {
      throw IncompleteGridError("CF grid lacks mu = " + std::to_string(mu.at(k)));
    }
    mu_index[k] = *idx;
  }
  std::vector<std::size_t> nu_index(g * g);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const double nu = grid.y.at(i) - grid.y.at(j);
      const auto idx = cf.nu.find(nu);
      if (!idx) throw IncompleteGridError("CF grid lacks nu = " + std::to_string(nu));
      nu_index[i * g + j] = *idx;
    }
  }
  return reconstruct_impl(
      [&](std::size_t k, std::size_t i, std::size_t j) {
        return cf.at(mu_index[k], nu_index[i * g + j]);
      },
      grid, tail);
}

DensityKernelGrid reconstruct_rho(const CFFunction& cf, const ReconstructionGrid& grid,
                                  bool tail) {
  const Axis mu = grid.mu_axis();
  return reconstruct_impl(
      [&](std::size_t k, std::size_t i, std::size_t j) {
        return cf(mu.at(k), grid.y.at(i) - grid.y.at(j));
      },
      grid, tail);
}

DensityKernelGrid analytic_density_grid(const ReferenceState& state, const UniformGrid& y) {
  DensityKernelGrid out;
  out.y = y;
  const auto g = static_cast<Eigen::Index>(y.points);
  out.values.resize(g, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = 0; j < g; ++j) {
      out.values(i, j) = density_kernel(state, y.at(static_cast<std::size_t>(i)),
                                        y.at(static_cast<std::size_t>(j)));
    }
  }
  return out;
}

TailCorrection tail_correction(double y, double yp, double mu_max) {
  const cplx zm(0.5 * mu_max, -0.5 * (y + yp));
  const cplx zp(0.5 * mu_max, 0.5 * (y + yp));
  TailCorrection tc;
  tc.outside_validated_range = std::abs(zm) > kErfcValidatedRadius;
  const double pref =
      std::exp(-0.5 * (y * y + yp * yp)) / (2.0 * std::sqrt(std::numbers::pi));
  tc.value = pref * (erfc(zm) + erfc(zp));
  return tc;
}

double overlap(const CFGrid& cf1, const CFGrid& cf2, double noise_prefactor) {
  if (!cf1.mu.same_as(cf2.mu) || !cf1.nu.same_as(cf2.nu)) {
    throw GridMismatchError("overlap needs both grids on the same lattice");
  }
  if (!cf2.mu.symmetric() || !cf2.nu.symmetric()) {
    throw GridMismatchError("overlap of two estimated grids needs a symmetric lattice");
  }
  const double cell = lattice_cell(cf1.mu) * lattice_cell(cf1.nu);
  const std::size_t nm = cf1.mu.count;
  const std::size_t nn = cf1.nu.count;
  cplx sum = 0.0;
  for (std::size_t i = 0; i < nm; ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      sum += cf1.at(i, j) * cf2.at(nm - 1 - i, nn - 1 - j);
    }
  }
  return gated_real(cell / kTwoPi * sum * noise_prefactor, "overlap",
                    is_exact(cf1) && is_exact(cf2));
}

double overlap(const CFFunction& cf1, const CFGrid& cf2, double noise_prefactor) {
  const double cell = lattice_cell(cf2.mu) * lattice_cell(cf2.nu);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < cf2.mu.count; ++i) {
    for (std::size_t j = 0; j < cf2.nu.count; ++j) {
      sum += cf1(-cf2.mu.at(i), -cf2.nu.at(j)) * cf2.at(i, j);
    }
  }
  return gated_real(cell / kTwoPi * sum * noise_prefactor, "overlap", is_exact(cf2));
}

double overlap(const CFFunction& cf1, const CFFunction& cf2, const Axis& mu, const Axis& nu) {
  const double cell = lattice_cell(mu) * lattice_cell(nu);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < mu.count; ++i) {
    for (std::size_t j = 0; j < nu.count; ++j) {
      sum += cf1(mu.at(i), nu.at(j)) * cf2(-mu.at(i), -nu.at(j));
    }
  }
  return gated_real(cell / kTwoPi * sum, "overlap");
}

double overlap_noise_prefactor(const NoiseModel& nm, int power) {
  nm.validate();
  const cplx phi = nm.noise_cf((1.0 - nm.kappa) / nm.kappa);
  return std::pow(std::abs(phi), -power);
}

namespace {

std::size_t check_budget(std::size_t nodes, std::size_t budget) {
  const double terms = static_cast<double>(nodes) * static_cast<double>(nodes);
  if (terms > static_cast<double>(budget)) {
    throw TermBudgetError("tr rho^3 lattice has " + std::to_string(terms) +
                          " terms, above the budget of " + std::to_string(budget) +
                          "; use at most about " +
                          std::to_string(static_cast<int>(std::sqrt(std::sqrt(
                              static_cast<double>(budget))))) +
                          " nodes per axis");
  }
  return nodes;
}

// Sum over node pairs; third(i1, j1, i2, j2, mu, nu) returns phi at x1 + x2 or 0.
template <class Phi, class Third>
double trace3_impl(const Axis& mu, const Axis& nu, Phi&& phi, Third&& third, bool gate) {
  const std::size_t nm = mu.count;
  const std::size_t nn = nu.count;
  // exp(-(i/2) mu1 nu2) and exp(+(i/2) nu1 mu2) factor the symplectic phase
  std::vector<cplx> a(nm * nn);
  std::vector<cplx> b(nn * nm);
  for (std::size_t i = 0; i < nm; ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      a[i * nn + j] = std::polar(1.0, -0.5 * mu.at(i) * nu.at(j));
      b[j * nm + i] = std::polar(1.0, 0.5 * nu.at(j) * mu.at(i));
    }
  }
  cplx sum = 0.0;
  for (std::size_t i1 = 0; i1 < nm; ++i1) {
    for (std::size_t j1 = 0; j1 < nn; ++j1) {
      const cplx p1 = phi(i1, j1);
      if (p1 == cplx(0.0, 0.0)) continue;
      cplx inner = 0.0;
      for (std::size_t i2 = 0; i2 < nm; ++i2) {
        for (std::size_t j2 = 0; j2 < nn; ++j2) {
          const cplx p3 = third(i1, j1, i2, j2);
          if (p3 == cplx(0.0, 0.0)) continue;
          inner += phi(i2, j2) * std::conj(p3) * a[i1 * nn + j2] * b[j1 * nm + i2];
        }
      }
      sum += p1 * inner;
    }
  }
  const double cell = mu.step * nu.step;
  return gated_real(cell * cell / (kTwoPi * kTwoPi) * sum, "tr rho^3", gate);
}

}  // namespace

double trace_power_3(const CFGrid& cf, std::size_t budget) {
  const Axis& mu = cf.mu;
  const Axis& nu = cf.nu;
  if (mu.count < 3 || nu.count < 3 || mu.count % 2 == 0 || nu.count % 2 == 0 ||
      !mu.symmetric() || !nu.symmetric()) {
    throw GridMismatchError(
        "tr rho^3 from a grid needs odd symmetric axes so the lattice is closed under addition");
  }
  check_budget(cf.size(), budget);
  const auto cm = static_cast<std::ptrdiff_t>(mu.count / 2);
  const auto cn = static_cast<std::ptrdiff_t>(nu.count / 2);
  const auto nm = static_cast<std::ptrdiff_t>(mu.count);
  const auto nn = static_cast<std::ptrdiff_t>(nu.count);
  return trace3_impl(
      mu, nu, [&](std::size_t i, std::size_t j) { return cf.at(i, j); },
      [&](std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) -> cplx {
        const auto i = static_cast<std::ptrdiff_t>(i1 + i2) - cm;
        const auto j = static_cast<std::ptrdiff_t>(j1 + j2) - cn;
        if (i < 0 || i >= nm || j < 0 || j >= nn) return 0.0;
        return cf.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      },
      is_exact(cf));
}

double trace_power_3(const CFFunction& cf, const Axis& mu, const Axis& nu, std::size_t budget) {
  lattice_cell(mu);
  lattice_cell(nu);
  check_budget(mu.count * nu.count, budget);
  std::vector<cplx> table(mu.count * nu.count);
  for (std::size_t i = 0; i < mu.count; ++i) {
    for (std::size_t j = 0; j < nu.count; ++j) table[i * nu.count + j] = cf(mu.at(i), nu.at(j));
  }
  return trace3_impl(
      mu, nu, [&](std::size_t i, std::size_t j) { return table[i * nu.count + j]; },
      [&](std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
        return cf(mu.at(i1) + mu.at(i2), nu.at(j1) + nu.at(j2));
      },
      true);
}

double trace_distance_pure(double overlap_value) {
  return std::sqrt(std::clamp(1.0 - overlap_value, 0.0, 1.0));
}

ValidationReport validate_cf_grid(const CFGrid& cf, const std::vector<ReferenceState>& probes) {
  ValidationReport r;
  const bool analytic = cf.source == "analytic";
  std::size_t n = 0;
  for (std::size_t v : cf.n) n = std::max(n, v);
  const double sampled_tol = n > 0 ? 5.0 / std::sqrt(static_cast<double>(n)) : 0.0;
  double amplification = 1.0;
  if (cf.deconvolved && cf.noise) amplification = overlap_noise_prefactor(*cf.noise, 1);
  r.hermiticity_tolerance = analytic ? 1e-10 : sampled_tol * amplification;
  r.normalization_tolerance = analytic ? 1e-10 : sampled_tol * amplification;
  r.positivity_tolerance = analytic ? 1e-6 : 0.03;

  std::size_t pairs = 0;
  for (std::size_t i = 0; i < cf.mu.count; ++i) {
    const auto im = cf.mu.find(-cf.mu.at(i));
    if (!im) continue;
    for (std::size_t j = 0; j < cf.nu.count; ++j) {
      const auto jn = cf.nu.find(-cf.nu.at(j));
      if (!jn) continue;
      ++pairs;
      r.hermiticity_violation = std::max(
          r.hermiticity_violation, std::abs(cf.at(i, j) - std::conj(cf.at(*im, *jn))));
    }
  }
  r.hermitian = pairs > 0 && r.hermiticity_violation <= r.hermiticity_tolerance;
  if (pairs == 0) r.notes.emplace_back("no mirrored node pairs; hermiticity not checked");

  if (const auto origin = cf.lookup(0.0, 0.0)) {
    r.normalization_checked = true;
    r.normalization_violation = std::abs(*origin - cplx(1.0, 0.0));
    r.normalized = r.normalization_violation <= r.normalization_tolerance;
  } else {
    r.notes.emplace_back("lattice lacks the origin; normalization not checked");
  }

  r.positive = !probes.empty();
  if (probes.empty()) r.notes.emplace_back("no probe states; positivity not checked");
  for (const auto& probe : probes) {
    try {
      const double ov = overlap(cf_function(probe), cf, 1.0);
      r.probe_overlaps.push_back(ov);
      const double excess = std::max({0.0, -ov, ov - 1.0});
      r.positivity_violation = std::max(r.positivity_violation, excess);
      if (excess > r.positivity_tolerance) r.positive = false;
    } catch (const Error& e) {
      r.positive = false;
      r.notes.emplace_back(std::string("probe ") + probe.tag() + ": " + e.what());
    }
  }
  return r;
}

double wigner_from_cf(const CFGrid& cf, double q, double p) {
  const double cell = lattice_cell(cf.mu) * lattice_cell(cf.nu);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < cf.mu.count; ++i) {
    for (std::size_t j = 0; j < cf.nu.count; ++j) {
      sum += cf.at(i, j) * std::polar(1.0, -(cf.mu.at(i) * q + cf.nu.at(j) * p));
    }
  }
  return gated_real(cell / (kTwoPi * kTwoPi) * sum, "wigner", is_exact(cf));
}

double wigner_from_cf(const CFFunction& cf, const Axis& mu, const Axis& nu, double q, double p) {
  const double cell = lattice_cell(mu) * lattice_cell(nu);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < mu.count; ++i) {
    for (std::size_t j = 0; j < nu.count; ++j) {
      sum += cf(mu.at(i), nu.at(j)) * std::polar(1.0, -(mu.at(i) * q + nu.at(j) * p));
    }
  }
  return gated_real(cell / (kTwoPi * kTwoPi) * sum, "wigner");
}

double sup_error(const DensityKernelGrid& est, const Eigen::MatrixXcd& truth) {
  if (est.values.rows() != truth.rows() || est.values.cols() != truth.cols()) {
    throw GridMismatchError("sup_error needs matching grids");
  }
  return (est.values - truth).cwiseAbs2().maxCoeff();
}

double sup_error(const DensityKernelGrid& est, const ReferenceState& truth) {
  return sup_error(est, analytic_density_grid(truth, est.y).values);
}

}  // namespace kqse
