#include "kqse/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kqse/errors.hpp"
#include "kqse/stats.hpp"

namespace kqse {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;
// Gaussian bumps are cut at |u| > 9, where the density is below 1e-17.
constexpr double kGaussianCutoff = 9.0;

double kernel_reach(KernelKind k) {
  return k == KernelKind::GaussianStd ? kGaussianCutoff : 1.0;
}

// (K * K)(u) for the convolution term of the LSCV score.
double kernel_self_convolution(KernelKind k, double u) {
  if (k == KernelKind::GaussianStd) {
    return std::exp(-0.25 * u * u) / (2.0 * std::sqrt(std::numbers::pi));
  }
  const double a = std::abs(u);
  if (a >= 2.0) return 0.0;
  const double b = 2.0 - a;
  return 3.0 / 160.0 * b * b * b * (a * a + 6.0 * a + 4.0);
}

}  // namespace

std::string kernel_name(KernelKind k) {
  return k == KernelKind::GaussianStd ? "gaussian" : "epanechnikov";
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "gaussian") return KernelKind::GaussianStd;
  if (name == "epanechnikov") return KernelKind::Epanechnikov;
  throw ConfigError("unknown kernel '" + name + "' (expected gaussian or epanechnikov)");
}

double kernel_density(KernelKind k, double u) {
  if (k == KernelKind::GaussianStd) return kInvSqrt2Pi * std::exp(-0.5 * u * u);
  return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

double DensityEstimate::at(double x) const {
  const double pos = (x - grid.lo) / grid.step();
  if (pos < 0.0 || pos > static_cast<double>(grid.points - 1)) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(pos), grid.points - 2);
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

double silverman_bandwidth(std::span<const double> x) {
  if (x.size() < 3) throw DegenerateSampleError("Silverman's rule needs at least 3 samples");
  const double sd = std::sqrt(sample_variance(x));
  const double iqr = interquartile_range(x);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = sd;
  if (spread <= 0.0) throw DegenerateSampleError("all samples are equal");
  return 0.9 * spread * std::pow(static_cast<double>(x.size()), -0.2);
}

double lscv_score(std::span<const double> x, KernelKind k, double h) {
  const std::size_t n = x.size();
  if (n < 2) throw DegenerateSampleError("LSCV needs at least 2 samples");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double reach = 2.0 * kernel_reach(k) * h;
  double conv = 0.0;   // sum over i != j of (K*K)((X_i - X_j)/h)
  double loo = 0.0;    // sum over i != j of K((X_i - X_j)/h)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && s[j] - s[i] <= reach; ++j) {
      const double u = (s[j] - s[i]) / h;
      conv += 2.0 * kernel_self_convolution(k, u);
      loo += 2.0 * kernel_density(k, u);
    }
  }
  const double nd = static_cast<double>(n);
  const double integral_f2 = (conv + nd * kernel_self_convolution(k, 0.0)) / (nd * nd * h);
  const double loo_term = 2.0 * loo / (nd * (nd - 1.0) * h);
  return integral_f2 - loo_term;
}

double lscv_bandwidth(std::span<const double> x, KernelKind k, std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("LSCV bandwidth grid is empty");
  std::vector<double> g(grid.begin(), grid.end());
  std::sort(g.begin(), g.end());
  if (g.front() <= 0.0) throw ConfigError("LSCV bandwidth grid must be positive");
  if (g.size() == 1) return g.front();
  double best_h = g.front();
  double best = lscv_score(x, k, best_h);
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double score = lscv_score(x, k, g[i]);
    if (score < best) {
      best = score;
      best_h = g[i];
    }
  }
  return best_h;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (count == 0 || lo <= 0.0 || hi < lo) throw ConfigError("bad log-spaced grid");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double r = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::exp(r * static_cast<double>(i));
  return g;
}

DensityEstimate kde_evaluate(std::span<const double> x, KernelKind k, double h,
                             const UniformGrid& grid) {
  if (!(h > 0.0)) throw ConfigError("bandwidth must be positive");
  if (grid.points < 2) throw ConfigError("evaluation grid needs at least 2 points");
  DensityEstimate est;
  est.grid = grid;
  est.values.assign(grid.points, 0.0);
  est.h = h;
  est.method = "kde:" + kernel_name(k);
  est.n = x.size();

  const double step = grid.step();
  const double reach = kernel_reach(k) * h;
  const double inv_h = 1.0 / h;
  const auto last = static_cast<std::ptrdiff_t>(grid.points) - 1;
  for (double xi : x) {
    const auto first = std::max<std::ptrdiff_t>(
        0, static_cast<std::ptrdiff_t>(std::ceil((xi - reach - grid.lo) / step)));
    const auto stop = std::min<std::ptrdiff_t>(
        last, static_cast<std::ptrdiff_t>(std::floor((xi + reach - grid.lo) / step)));
    for (std::ptrdiff_t i = first; i <= stop; ++i) {
      const double u = (grid.lo + step * static_cast<double>(i) - xi) * inv_h;
      est.values[static_cast<std::size_t>(i)] += kernel_density(k, u);
    }
  }
  const double scale = 1.0 / (static_cast<double>(x.size()) * h);
  for (double& v : est.values) v *= scale;
  return est;
}

DensityEstimate kde_evaluate(const SampleBatch& b, KernelKind k, double h,
                             const UniformGrid& grid) {
  DensityEstimate est = kde_evaluate(b.values, k, h, grid);
  est.seed = b.seed;
  return est;
}

DensityEstimate fd_histogram(std::span<const double> x) {
  if (x.size() < 4) throw DegenerateSampleError("histogram needs at least 4 samples");
  const double iqr = interquartile_range(x);
  if (iqr <= 0.0) throw DegenerateSampleError("zero interquartile range");
  const double width = 2.0 * iqr * std::pow(static_cast<double>(x.size()), -1.0 / 3.0);
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const auto bins = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::floor((*mx - *mn) / width)) + 1);
  DensityEstimate est;
  est.grid = {*mn + 0.5 * width, *mn + (static_cast<double>(bins) - 0.5) * width, bins};
  est.values.assign(bins, 0.0);
  est.h = width;
  est.method = "histogram:fd";
  est.n = x.size();
  for (double v : x) {
    auto b = static_cast<std::size_t>((v - *mn) / width);
    est.values[std::min(b, bins - 1)] += 1.0;
  }
  const double scale = 1.0 / (static_cast<double>(x.size()) * width);
  for (double& v : est.values) v *= scale;
  return est;
}

std::vector<double> histogram_on_grid(const DensityEstimate& hist, const UniformGrid& grid) {
  const double width = hist.h;
  const double left = hist.grid.lo - 0.5 * width;
  std::vector<double> out(grid.points, 0.0);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double pos = (grid.at(i) - left) / width;
    if (pos < 0.0) continue;
    const auto b = static_cast<std::size_t>(pos);
    if (b < hist.values.size()) out[i] = hist.values[b];
  }
  return out;
}

double mise(const DensityEstimate& est, const DensityFunction& truth) {
  std::vector<double> f(est.grid.points);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = truth(est.grid.at(i));
  return mise(est.values, f, est.grid.step());
}

double mise(std::span<const double> est, std::span<const double> truth, double dx) {
  // trapezoid weights: half weight on the two end points
  double s = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double d = est[i] - truth[i];
    const double w = (i == 0 || i + 1 == est.size()) ? 0.5 : 1.0;
    s += w * d * d;
  }
  return s * dx;
}

double total_variation(const DensityFunction& f, const DensityFunction& g, double lo, double hi,
                       double step) {
  if (!(step > 0.0) || !(hi > lo)) throw ConfigError("bad total variation support");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step)) + 1;
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = lo + step * static_cast<double>(i);
    s += std::abs(f(x) - g(x));
  }
  return std::clamp(0.5 * s * step, 0.0, 1.0);
}

}  // namespace kqse
