#pragma once

#include <span>
#include <vector>

namespace kqse {

double mean(std::span<const double> x);
// Unbiased sample variance (divisor n - 1).
double sample_variance(std::span<const double> x);

// Type-7 (linear interpolation) quantile of already sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);
double interquartile_range(std::span<const double> x);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  // Two-sided 95% Student-t confidence interval for the slope.
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Ordinary least squares y = intercept + slope x. Needs at least 3 points.
SlopeFit fit_line(std::span<const double> x, std::span<const double> y);

// Fit on log(x), log(y).
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y);

// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> x, Cdf&& cdf);

}  // namespace kqse

#include <algorithm>
#include <cmath>

template <class Cdf>
double kqse::ks_statistic(std::vector<double> x, Cdf&& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}
