#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kqse/sampling.hpp"

namespace kqse {

enum class KernelKind { GaussianStd, Epanechnikov };

std::string kernel_name(KernelKind k);
// Accepts "gaussian" and "epanechnikov". Throws ConfigError otherwise.
KernelKind parse_kernel(const std::string& name);

// K(u): standard normal density, or 3/4 (1 - u^2) on [-1, 1].
double kernel_density(KernelKind k, double u);

// Uniform grid of m points from lo to hi inclusive.
struct UniformGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 2;

  double step() const { return (hi - lo) / static_cast<double>(points - 1); }
  double at(std::size_t i) const { return lo + step() * static_cast<double>(i); }
};

struct DensityEstimate {
  UniformGrid grid;
  std::vector<double> values;
  double h = 0.0;
  std::string method;  // "kde:gaussian", "kde:epanechnikov" or "histogram:fd"
  std::size_t n = 0;
  std::uint64_t seed = 0;

  // Linear interpolation between grid values, 0 outside the grid.
  double at(double x) const;
};

double silverman_bandwidth(std::span<const double> x);
inline double silverman_bandwidth(const SampleBatch& b) { return silverman_bandwidth(b.values); }

// Least-squares cross-validation score int f_h^2 - (2/n) sum_i f_{h,-i}(X_i).
double lscv_score(std::span<const double> x, KernelKind k, double h);
// Grid point with the smallest score; ties go to the smaller h.
double lscv_bandwidth(std::span<const double> x, KernelKind k, std::span<const double> grid);
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

DensityEstimate kde_evaluate(std::span<const double> x, KernelKind k, double h,
                             const UniformGrid& grid);
DensityEstimate kde_evaluate(const SampleBatch& b, KernelKind k, double h,
                             const UniformGrid& grid);

// Freedman-Diaconis histogram with bin width 2 IQR n^{-1/3}; the grid holds
// bin centres and values are densities normalized to unit mass.
DensityEstimate fd_histogram(std::span<const double> x);
// Histogram evaluated as a step function on another grid.
std::vector<double> histogram_on_grid(const DensityEstimate& hist, const UniformGrid& grid);

using DensityFunction = std::function<double(double)>;

// Riemann sum sum_i (est_i - f(x_i))^2 dx on the estimate's grid (trapezoid end weights).
double mise(const DensityEstimate& est, const DensityFunction& truth);
double mise(std::span<const double> est, std::span<const double> truth, double dx);

// (1/2) sum |f - g| dx over [lo, hi], clipped to [0, 1].
double total_variation(const DensityFunction& f, const DensityFunction& g, double lo, double hi,
                       double step);

}  // namespace kqse
