#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kqse/phase.hpp"
#include "kqse/reference_states.hpp"
#include "kqse/seeding.hpp"

namespace kqse {

// Detection noise Z = kappa X + (1 - kappa) Y with Y ~ N(mean, variance).
struct NoiseModel {
  double kappa = 0.85;
  double mean = 0.0;
  double variance = 1.0;

  // Throws ConfigError unless 0 < kappa < 1 and variance >= 0.
  void validate() const;
  // phi_Y(t) = exp(i mean t - variance t^2 / 2).
  cplx noise_cf(double t) const;
  std::string tag() const;
};

struct SampleBatch {
  PhaseSetting setting;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string state_tag;
  std::optional<std::string> noise_tag;
  std::uint64_t noise_seed = 0;

  std::size_t size() const { return values.size(); }
};

struct Support {
  double lo = -8.0;
  double hi = 8.0;
};

// Tabulated CDF on a uniform grid with a linear-interpolation inverse.
class InverseCdfTable {
 public:
  // Point mass at x (the quadrature at mu = nu = 0 is identically zero).
  static InverseCdfTable point_mass(double x, const PhaseSetting& s, std::string state_tag);

  double lo() const { return lo_; }
  double hi() const { return lo_ + step_ * static_cast<double>(cdf_.size() - 1); }
  std::size_t grid_points() const { return cdf_.size(); }
  bool is_point_mass() const { return cdf_.empty(); }

  double cdf(double x) const;
  double quantile(double u) const;

  // Probability captured by the support before renormalization.
  double captured_mass() const { return mass_; }
  // Bound on |interpolated CDF - exact CDF| over the support.
  double interpolation_error() const { return interp_error_; }

  const PhaseSetting& setting() const { return setting_; }
  const std::string& state_tag() const { return state_tag_; }

 private:
  friend InverseCdfTable build_sampler(const ReferenceState&, const PhaseSetting&, Support,
                                       std::size_t, double);
  InverseCdfTable() = default;

  double lo_ = 0.0;
  double step_ = 0.0;
  std::vector<double> cdf_;
  double mass_ = 1.0;
  double interp_error_ = 0.0;
  PhaseSetting setting_;
  std::string state_tag_;
};

inline constexpr std::size_t kMinSamplerGrid = 2048;
inline constexpr double kMinCapturedMass = 1.0 - 1e-10;
inline constexpr double kMaxCdfInterpolationError = 1e-7;

// Builds the table on [lo, hi]. The grid starts at grid_points and is doubled
// until the CDF interpolation error is at most max_interp_error.
// Throws SupportTooSmallError if the support holds less than 1 - 1e-10 of the
// mass and ConfigError if grid_points < 2048.
InverseCdfTable build_sampler(const ReferenceState& state, const PhaseSetting& s, Support support,
                              std::size_t grid_points,
                              double max_interp_error = kMaxCdfInterpolationError);

// Support chosen automatically: mean +- 8 sd, widened until the mass check passes.
InverseCdfTable build_sampler(const ReferenceState& state, const PhaseSetting& s,
                              std::size_t grid_points = 4096);

void draw_into(const InverseCdfTable& sampler, Engine& engine, std::span<double> out);
SampleBatch draw(const InverseCdfTable& sampler, std::size_t n, std::uint64_t seed);

// z_l = kappa x_l + (1 - kappa) y_l with an independent noise stream.
void mix_noise_into(std::span<const double> x, const NoiseModel& nm, Engine& engine,
                    std::span<double> out);
SampleBatch mix_noise(const SampleBatch& x, const NoiseModel& nm, std::uint64_t seed);

}  // namespace kqse
