#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kqse/kde.hpp"
#include "kqse/phase.hpp"
#include "kqse/reference_states.hpp"
#include "kqse/sampling.hpp"

namespace kqse {

// (1/n) sum_l exp(i t X_l).
cplx empirical_cf(std::span<const double> x, double t);
inline cplx empirical_cf(const SampleBatch& b, double t) { return empirical_cf(b.values, t); }

// Kernel characteristic function at argument t h.
// Gaussian: exp(-t^2 h^2 (mu^2 + nu^2) / 4). Epanechnikov: 3 (sin u - u cos u) / u^3, u = t h.
double kernel_cf(KernelKind k, double t, double h, const PhaseSetting& s);

inline constexpr double kPilotFloor = 1e-3;
// Clips a pilot |phi| into [1e-3, 1 - 1e-3].
double clip_pilot(double phi_mag);

// h = 2 / (t (mu^2 + nu^2)) * sqrt((1 - |phi|^2) / (2 n |phi|^2)).
// Returns 0 when t = 0 or at the origin of the parameter plane.
// Throws InvalidPilotError unless 0 < phi_mag < 1.
double optimal_bandwidth_cf(double phi_mag, std::size_t n, double t, const PhaseSetting& s);

struct CFPointEstimate {
  double t = 1.0;
  PhaseSetting setting;
  cplx value{1.0, 0.0};
  double h = 0.0;
  bool deconvolved = false;
  std::size_t n = 0;
};

// empirical_cf(x, t) * kernel_cf(k, t, h, setting).
CFPointEstimate kcfe_point(const SampleBatch& x, double t, KernelKind k, double h);
// Same with h from optimal_bandwidth_cf and the clipped empirical |phi| as pilot.
CFPointEstimate kcfe_point(const SampleBatch& x, double t, KernelKind k);
CFPointEstimate kcfe_point(std::span<const double> x, const PhaseSetting& s, double t,
                           KernelKind k);

// zhat must have been computed from Z data at argument t / kappa. Multiplies
// by 1 / phi_Y((1 - kappa) t / kappa) and relabels the estimate at t.
CFPointEstimate deconvolve(const CFPointEstimate& zhat, const NoiseModel& nm, double t);

// Uniform axis start + i * step, i < count.
struct Axis {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 1;

  double at(std::size_t i) const { return start + step * static_cast<double>(i); }
  double back() const { return at(count - 1); }
  // Index of the node equal to v within a small fraction of the step.
  std::optional<std::size_t> find(double v) const;
  bool same_as(const Axis& other) const;
  // True when the node set is invariant under v -> -v.
  bool symmetric() const;

  // count points from -max to max inclusive (a single point at 0 if count == 1).
  static Axis symmetric(double max, std::size_t count);
  // mu_k = k delta - max, delta = 2 max / count, k < count.
  static Axis dft(double max, std::size_t count);
  static Axis singleton(double v) { return {v, 1.0, 1}; }
};

// Values phi(t; mu_i, nu_j) on a rectangular lattice, row-major in mu.
struct CFGrid {
  Axis mu;
  Axis nu;
  double t = 1.0;
  std::vector<cplx> values;
  std::vector<double> h;
  std::vector<std::size_t> n;
  std::vector<std::uint64_t> seeds;
  std::optional<NoiseModel> noise;
  bool deconvolved = false;
  std::string kernel = "none";
  std::string source = "analytic";
  std::string state_tag;

  std::size_t size() const { return mu.count * nu.count; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * nu.count + j; }
  cplx& at(std::size_t i, std::size_t j) { return values[index(i, j)]; }
  const cplx& at(std::size_t i, std::size_t j) const { return values[index(i, j)]; }
  // Value at a lattice node, if (mu, nu) is one.
  std::optional<cplx> lookup(double mu_v, double nu_v) const;
};

CFGrid analytic_cf_grid(const ReferenceState& state, const Axis& mu, const Axis& nu,
                        double t = 1.0);

struct CFEstimateOptions {
  KernelKind kernel = KernelKind::GaussianStd;
  double t = 1.0;
  // When set, batches hold Z = kappa X + (1 - kappa) Y data.
  std::optional<NoiseModel> noise;
  // With noise: estimate at t / kappa and divide out phi_Y. Without: use Z at t as is.
  bool deconvolve = true;
  unsigned workers = 1;
};

using BatchSource = std::function<std::optional<SampleBatch>(std::size_t i, std::size_t j)>;

// Fills every lattice node from its batch. Throws IncompleteGridError when the
// source has no batch for a node and ConfigError when batch sizes differ.
CFGrid estimate_cf_grid(const Axis& mu, const Axis& nu, const BatchSource& source,
                        const CFEstimateOptions& opt);

}  // namespace kqse
