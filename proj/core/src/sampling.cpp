#include "kqse/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kqse/errors.hpp"

namespace kqse {

void NoiseModel::validate() const {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw ConfigError("noise kappa must lie strictly inside (0, 1)");
  }
  if (!(variance >= 0.0) || !std::isfinite(mean)) {
    throw ConfigError("noise variance must be nonnegative and the mean finite");
  }
}

cplx NoiseModel::noise_cf(double t) const {
  return std::exp(cplx(-0.5 * variance * t * t, mean * t));
}

std::string NoiseModel::tag() const {
  std::ostringstream os;
  os.precision(17);
  os << "gaussian(kappa=" << kappa << ",mean=" << mean << ",variance=" << variance << ")";
  return os.str();
}

InverseCdfTable InverseCdfTable::point_mass(double x, const PhaseSetting& s,
                                            std::string state_tag) {
  InverseCdfTable t;
  t.lo_ = x;
  t.setting_ = s;
  t.state_tag_ = std::move(state_tag);
  return t;
}

double InverseCdfTable::cdf(double x) const {
  if (cdf_.empty()) return x < lo_ ? 0.0 : 1.0;
  const double pos = (x - lo_) / step_;
  if (pos <= 0.0) return 0.0;
  if (pos >= static_cast<double>(cdf_.size() - 1)) return 1.0;
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return cdf_[i] + frac * (cdf_[i + 1] - cdf_[i]);
}

double InverseCdfTable::quantile(double u) const {
  if (cdf_.empty()) return lo_;
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return lo_;
  if (it == cdf_.end()) return hi();
  const auto i = static_cast<std::size_t>(it - cdf_.begin()) - 1;
  const double width = cdf_[i + 1] - cdf_[i];
  const double frac = width > 0.0 ? (u - cdf_[i]) / width : 0.0;
  return lo_ + step_ * (static_cast<double>(i) + frac);
}

namespace {

struct Tabulation {
  std::vector<double> cdf;
  double mass = 0.0;
  double interp_error = 0.0;
};

// Cumulative Simpson rule per interval with midpoints from a half-step grid.
Tabulation tabulate(const ReferenceState& state, const PhaseSetting& s, double lo, double step,
                    std::size_t points) {
  const auto f = tomogram_grid(state, s, lo, 0.5 * step, 2 * points - 1);
  Tabulation t;
  t.cdf.resize(points);
  t.cdf[0] = 0.0;
  double max_jump = 0.0;
  for (std::size_t i = 0; i + 1 < points; ++i) {
    const double a = f[2 * i];
    const double m = f[2 * i + 1];
    const double b = f[2 * i + 2];
    t.cdf[i + 1] = t.cdf[i] + step / 6.0 * (a + 4.0 * m + b);
    max_jump = std::max(max_jump, std::abs(b - a));
  }
  t.mass = t.cdf.back();
  t.interp_error = step * max_jump / 8.0 / t.mass;
  for (double& c : t.cdf) c /= t.mass;
  t.cdf.back() = 1.0;
  return t;
}

}  // namespace

InverseCdfTable build_sampler(const ReferenceState& state, const PhaseSetting& s, Support support,
                              std::size_t grid_points, double max_interp_error) {
  if (s.degenerate()) return InverseCdfTable::point_mass(0.0, s, state.tag());
  if (grid_points < kMinSamplerGrid) {
    throw ConfigError("sampler grid needs at least " + std::to_string(kMinSamplerGrid) +
                      " points");
  }
  if (!(support.hi > support.lo)) throw ConfigError("sampler support must have hi > lo");

  constexpr std::size_t kMaxGrid = std::size_t{1} << 23;
  std::size_t points = grid_points;
  while (true) {
    const double step = (support.hi - support.lo) / static_cast<double>(points - 1);
    Tabulation t = tabulate(state, s, support.lo, step, points);
    if (t.mass < kMinCapturedMass) {
      throw SupportTooSmallError("support [" + std::to_string(support.lo) + ", " +
                                 std::to_string(support.hi) + "] holds only mass " +
                                 std::to_string(t.mass));
    }
    if (t.interp_error <= max_interp_error) {
      InverseCdfTable table;
      table.lo_ = support.lo;
      table.step_ = step;
      table.cdf_ = std::move(t.cdf);
      table.mass_ = t.mass;
      table.interp_error_ = t.interp_error;
      table.setting_ = s;
      table.state_tag_ = state.tag();
      return table;
    }
    if (points >= kMaxGrid) {
      throw NumericalGateError("sampler grid refinement did not reach the CDF error target");
    }
    points = 2 * points - 1;
  }
}

InverseCdfTable build_sampler(const ReferenceState& state, const PhaseSetting& s,
                              std::size_t grid_points) {
  if (s.degenerate()) return InverseCdfTable::point_mass(0.0, s, state.tag());
  const auto m = quadrature_moments(state, s);
  double half_width = 8.0 * m.stddev;
  for (int attempt = 0; attempt < 12; ++attempt) {
    try {
      return build_sampler(state, s, {m.mean - half_width, m.mean + half_width}, grid_points);
    } catch (const SupportTooSmallError&) {
      half_width *= 1.5;
    }
  }
  throw SupportTooSmallError("automatic support expansion failed for " + state.tag());
}

void draw_into(const InverseCdfTable& sampler, Engine& engine, std::span<double> out) {
  for (double& v : out) v = sampler.quantile(uniform01(engine));
}

SampleBatch draw(const InverseCdfTable& sampler, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("sample size must be at least 1");
  SampleBatch batch;
  batch.setting = sampler.setting();
  batch.seed = seed;
  batch.state_tag = sampler.state_tag();
  batch.values.resize(n);
  Engine engine(seed);
  draw_into(sampler, engine, batch.values);
  return batch;
}

void mix_noise_into(std::span<const double> x, const NoiseModel& nm, Engine& engine,
                    std::span<double> out) {
  const double sd = std::sqrt(nm.variance);
  const double w = 1.0 - nm.kappa;
  if (sd == 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = nm.kappa * x[i] + w * nm.mean;
    return;
  }
  std::normal_distribution<double> noise(nm.mean, sd);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = nm.kappa * x[i] + w * noise(engine);
}

SampleBatch mix_noise(const SampleBatch& x, const NoiseModel& nm, std::uint64_t seed) {
  nm.validate();
  SampleBatch z = x;
  z.noise_tag = nm.tag();
  z.noise_seed = seed;
  Engine engine(seed);
  mix_noise_into(x.values, nm, engine, z.values);
  return z;
}

}  // namespace kqse
