#include "kqse/kcfe.hpp"

#include <algorithm>
#include <cmath>

#include "kqse/errors.hpp"
#include "kqse/parallel.hpp"

namespace kqse {

cplx empirical_cf(std::span<const double> x, double t) {
  if (x.empty()) throw DegenerateSampleError("empirical CF of an empty batch");
  if (t == 0.0) return {1.0, 0.0};
  double re = 0.0;
  double im = 0.0;
  for (double v : x) {
    re += std::cos(t * v);
    im += std::sin(t * v);
  }
  const double n = static_cast<double>(x.size());
  return {re / n, im / n};
}

double kernel_cf(KernelKind k, double t, double h, const PhaseSetting& s) {
  if (h < 0.0) throw ConfigError("bandwidth must be nonnegative");
  if (k == KernelKind::GaussianStd) return std::exp(-0.25 * t * t * h * h * s.alpha2());
  const double u = t * h;
  if (std::abs(u) < 0.05) {
    const double u2 = u * u;
    return 1.0 - u2 / 10.0 + u2 * u2 / 280.0 - u2 * u2 * u2 / 15120.0;
  }
  return 3.0 * (std::sin(u) - u * std::cos(u)) / (u * u * u);
}

double clip_pilot(double phi_mag) { return std::clamp(phi_mag, kPilotFloor, 1.0 - kPilotFloor); }

double optimal_bandwidth_cf(double phi_mag, std::size_t n, double t, const PhaseSetting& s) {
  if (!(phi_mag > 0.0 && phi_mag < 1.0)) {
    throw InvalidPilotError("pilot |phi| must lie strictly inside (0, 1)");
  }
  if (n == 0) throw ConfigError("sample size must be at least 1");
  const double alpha2 = s.alpha2();
  if (t == 0.0 || alpha2 == 0.0) return 0.0;
  const double p2 = phi_mag * phi_mag;
  return 2.0 / (std::abs(t) * alpha2) *
         std::sqrt((1.0 - p2) / (2.0 * static_cast<double>(n) * p2));
}

CFPointEstimate kcfe_point(const SampleBatch& x, double t, KernelKind k, double h) {
  CFPointEstimate e;
  e.t = t;
  e.setting = x.setting;
  e.h = h;
  e.n = x.size();
  e.value = empirical_cf(x.values, t) * kernel_cf(k, t, h, x.setting);
  return e;
}

CFPointEstimate kcfe_point(std::span<const double> x, const PhaseSetting& s, double t,
                           KernelKind k) {
  const cplx raw = empirical_cf(x, t);
  const double h = optimal_bandwidth_cf(clip_pilot(std::abs(raw)), x.size(), t, s);
  CFPointEstimate e;
  e.t = t;
  e.setting = s;
  e.h = h;
  e.n = x.size();
  e.value = raw * kernel_cf(k, t, h, s);
  return e;
}

CFPointEstimate kcfe_point(const SampleBatch& x, double t, KernelKind k) {
  return kcfe_point(x.values, x.setting, t, k);
}

CFPointEstimate deconvolve(const CFPointEstimate& zhat, const NoiseModel& nm, double t) {
  nm.validate();
  const double expected = t / nm.kappa;
  if (std::abs(zhat.t - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
    throw ConfigError("deconvolution expects the Z estimate at t / kappa");
  }
  const cplx noise = nm.noise_cf((1.0 - nm.kappa) * t / nm.kappa);
  if (!(std::abs(noise) > 0.0) || !std::isfinite(std::abs(noise))) {
    throw NumericalGateError("noise characteristic function vanishes; cannot deconvolve");
  }
  CFPointEstimate out = zhat;
  out.t = t;
  out.value = zhat.value / noise;
  out.deconvolved = true;
  return out;
}

std::optional<std::size_t> Axis::find(double v) const {
  if (count == 1) {
    if (std::abs(v - start) <= 1e-9 * std::max(1.0, std::abs(start))) return 0;
    return std::nullopt;
  }
  const double pos = (v - start) / step;
  const double r = std::round(pos);
  if (r < 0.0 || r > static_cast<double>(count - 1) || std::abs(pos - r) > 1e-6) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(r);
}

bool Axis::same_as(const Axis& other) const {
  if (count != other.count) return false;
  const double tol = 1e-9 * std::max({1.0, std::abs(start), std::abs(step)});
  return std::abs(start - other.start) <= tol &&
         (count == 1 || std::abs(step - other.step) <= tol);
}

bool Axis::symmetric() const {
  const double tol = 1e-9 * std::max(1.0, std::abs(step));
  return std::abs(start + back()) <= tol;
}

Axis Axis::symmetric(double max, std::size_t count) {
  if (count == 0) throw ConfigError("axis needs at least one point");
  if (count == 1) return singleton(0.0);
  return {-max, 2.0 * max / static_cast<double>(count - 1), count};
}

Axis Axis::dft(double max, std::size_t count) {
  if (count < 2) throw ConfigError("DFT axis needs at least two points");
  return {-max, 2.0 * max / static_cast<double>(count), count};
}

std::optional<cplx> CFGrid::lookup(double mu_v, double nu_v) const {
  const auto i = mu.find(mu_v);
  const auto j = nu.find(nu_v);
  if (!i || !j) return std::nullopt;
  return at(*i, *j);
}

CFGrid analytic_cf_grid(const ReferenceState& state, const Axis& mu, const Axis& nu, double t) {
  CFGrid g;
  g.mu = mu;
  g.nu = nu;
  g.t = t;
  g.values.resize(g.size());
  g.h.assign(g.size(), 0.0);
  g.n.assign(g.size(), 0);
  g.state_tag = state.tag();
  for (std::size_t i = 0; i < mu.count; ++i) {
    for (std::size_t j = 0; j < nu.count; ++j) {
      g.at(i, j) = cf(state, t, {mu.at(i), nu.at(j)});
    }
  }
  return g;
}

CFGrid estimate_cf_grid(const Axis& mu, const Axis& nu, const BatchSource& source,
                        const CFEstimateOptions& opt) {
  if (opt.noise) opt.noise->validate();
  CFGrid g;
  g.mu = mu;
  g.nu = nu;
  g.t = opt.t;
  g.values.resize(g.size());
  g.h.resize(g.size());
  g.n.resize(g.size());
  g.seeds.resize(g.size());
  g.noise = opt.noise;
  g.deconvolved = opt.noise.has_value() && opt.deconvolve;
  g.kernel = kernel_name(opt.kernel);
  g.source = "sampled";

  std::vector<std::string> tags(g.size());
  parallel_for(g.size(), opt.workers, [&](std::size_t idx) {
    const std::size_t i = idx / nu.count;
    const std::size_t j = idx % nu.count;
    const auto batch = source(i, j);
    if (!batch) {
      throw IncompleteGridError("no sample batch for setting (" + std::to_string(mu.at(i)) +
                                ", " + std::to_string(nu.at(j)) + ")");
    }
    CFPointEstimate e;
    if (g.deconvolved) {
      e = deconvolve(kcfe_point(*batch, opt.t / opt.noise->kappa, opt.kernel), *opt.noise,
                     opt.t);
    } else {
      e = kcfe_point(*batch, opt.t, opt.kernel);
    }
    g.values[idx] = e.value;
    g.h[idx] = e.h;
    g.n[idx] = e.n;
    g.seeds[idx] = batch->seed;
    tags[idx] = batch->state_tag;
  });
  if (std::adjacent_find(g.n.begin(), g.n.end(), std::not_equal_to<>()) != g.n.end()) {
    throw ConfigError("all settings of a CF grid must use the same sample size");
  }
  if (!tags.empty()) g.state_tag = tags.front();
  return g;
}

}  // namespace kqse
