#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kqse/errors.hpp"
#include "kqse/kde.hpp"
#include "kqse/sampling.hpp"
#include "kqse/seeding.hpp"

using namespace kqse;

namespace {

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed) {
  Engine e(seed);
  std::normal_distribution<double> d;
  std::vector<double> x(n);
  for (auto& v : x) v = d(e);
  return x;
}

std::vector<double> cat_sample(std::size_t n, std::uint64_t seed) {
  static const auto sampler = build_sampler(ReferenceState::cat({1.0, 0.5}), {0.8, 1.2});
  return draw(sampler, n, seed).values;
}

double integral(const std::vector<double>& v, double dx) {
  double s = 0.0;
  for (double x : v) s += x;
  return s * dx;
}

}  // namespace

TEST(Kernel, DensitiesIntegrateToOne) {
  for (auto k : {KernelKind::GaussianStd, KernelKind::Epanechnikov}) {
    double s = 0.0;
    for (double u = -10; u <= 10; u += 1e-3) s += kernel_density(k, u) * 1e-3;
    EXPECT_NEAR(s, 1.0, 1e-6) << kernel_name(k);
  }
  EXPECT_DOUBLE_EQ(kernel_density(KernelKind::Epanechnikov, 1.5), 0.0);
  EXPECT_DOUBLE_EQ(kernel_density(KernelKind::Epanechnikov, 0.0), 0.75);
}

TEST(Kernel, NamesRoundTrip) {
  for (auto k : {KernelKind::GaussianStd, KernelKind::Epanechnikov}) {
    EXPECT_EQ(parse_kernel(kernel_name(k)), k);
  }
  EXPECT_THROW(parse_kernel("box"), ConfigError);
}

TEST(Silverman, StandardNormal) {
  const auto x = normal_sample(1000000, 1);
  EXPECT_NEAR(silverman_bandwidth(x), 0.9 * std::pow(1e6, -0.2), 0.02 * 0.9 * std::pow(1e6, -0.2));
}

TEST(Silverman, CatTomogramBandwidth) {
  double h = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) h += silverman_bandwidth(cat_sample(500, seed));
  EXPECT_NEAR(h / 20, 0.33, 0.05);
}

TEST(Silverman, DegenerateSamples) {
  const std::vector<double> same(10, 2.5);
  EXPECT_THROW(silverman_bandwidth(same), DegenerateSampleError);
  EXPECT_THROW(silverman_bandwidth(std::vector<double>{1.0}), DegenerateSampleError);
}

TEST(Lscv, AgreesWithSilvermanOnNormalData) {
  const auto x = normal_sample(2000, 2);
  const double h = lscv_bandwidth(x, KernelKind::GaussianStd, log_spaced(0.05, 1.0, 80));
  EXPECT_NEAR(h, silverman_bandwidth(x), 0.25 * silverman_bandwidth(x));
}

TEST(Lscv, CatTomogramRange) {
  const auto x = cat_sample(500, 3);
  const double h = lscv_bandwidth(x, KernelKind::GaussianStd, log_spaced(0.05, 1.0, 40));
  EXPECT_GE(h, 0.2);
  EXPECT_LE(h, 0.6);
}

TEST(Lscv, ScoreMatchesBruteForce) {
  const auto x = normal_sample(60, 4);
  const double h = 0.4;
  // integral of fhat^2 on a fine grid minus twice the leave-one-out mean
  const UniformGrid g{-12, 12, 24001};
  const auto f = kde_evaluate(x, KernelKind::Epanechnikov, h, g);
  double sq = 0.0;
  for (double v : f.values) sq += v * v;
  sq *= g.step();
  double loo = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i != j) loo += kernel_density(KernelKind::Epanechnikov, (x[i] - x[j]) / h) / h;
    }
  }
  const double n = static_cast<double>(x.size());
  EXPECT_NEAR(lscv_score(x, KernelKind::Epanechnikov, h), sq - 2.0 * loo / (n * (n - 1)), 1e-5);
}

TEST(Kde, EstimateIntegratesToOne) {
  const auto x = cat_sample(1000, 5);
  const UniformGrid g{-10, 10, 2001};
  for (auto k : {KernelKind::GaussianStd, KernelKind::Epanechnikov}) {
    const auto est = kde_evaluate(x, k, 0.3, g);
    EXPECT_NEAR(integral(est.values, g.step()), 1.0, 1e-5);
    EXPECT_EQ(est.n, 1000u);
    EXPECT_DOUBLE_EQ(est.h, 0.3);
  }
}

TEST(Kde, SinglePointIsScaledKernel) {
  const std::vector<double> x{0.5};
  const UniformGrid g{-1, 2, 31};
  const auto est = kde_evaluate(x, KernelKind::GaussianStd, 0.2, g);
  for (std::size_t i = 0; i < g.points; ++i) {
    const double u = (g.at(i) - 0.5) / 0.2;
    EXPECT_NEAR(est.values[i], std::exp(-u * u / 2) / std::sqrt(2 * std::numbers::pi) / 0.2, 1e-14);
  }
}

TEST(Kde, NonPositiveBandwidthRejected) {
  EXPECT_THROW(kde_evaluate(std::vector<double>{1.0, 2.0}, KernelKind::GaussianStd, 0.0,
                            UniformGrid{-1, 1, 11}),
               Error);
}

TEST(Histogram, WorseThanGaussianKde) {
  const auto truth = [](double x) { return std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi); };
  const UniformGrid g{-6, 6, 1201};
  double hist = 0.0;
  double kde = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = normal_sample(2000, 100 + seed);
    const auto f = kde_evaluate(x, KernelKind::GaussianStd, silverman_bandwidth(x), g);
    kde += mise(f, truth);
    auto hst = fd_histogram(x);
    DensityEstimate onto = f;
    onto.values = histogram_on_grid(hst, g);
    hist += mise(onto, truth);
  }
  EXPECT_GT(hist, kde);
}

TEST(Histogram, UnitMass) {
  const auto x = normal_sample(5000, 9);
  const auto h = fd_histogram(x);
  EXPECT_NEAR(integral(h.values, h.h), 1.0, 1e-12);
  EXPECT_EQ(h.method, "histogram:fd");
}

TEST(Mise, ConstantOffset) {
  const UniformGrid g{0, 1, 101};
  std::vector<double> a(g.points, 1.3);
  std::vector<double> b(g.points, 1.0);
  EXPECT_NEAR(mise(a, b, g.step()), 0.09, 1e-14);
}

TEST(TotalVariation, CoherentPairBoundedByTraceDistance) {
  const auto a = ReferenceState::coherent({0.4, 0.0});
  const auto b = ReferenceState::coherent({-0.4, 0.0});
  const PhaseSetting s{1.0, 0.0};
  const double tv = total_variation([&](double x) { return tomogram(a, s, x); },
                                    [&](double x) { return tomogram(b, s, x); }, -10, 10, 1e-3);
  EXPECT_LE(tv, std::sqrt(1 - std::exp(-0.64)) + 1e-6);
  EXPECT_GT(tv, 0.0);
}

TEST(TotalVariation, DisjointSupportsGiveOne) {
  const auto f = [](double x) { return x >= 0 && x < 1 ? 1.0 : 0.0; };
  const auto g = [](double x) { return x >= 2 && x < 3 ? 1.0 : 0.0; };
  EXPECT_NEAR(total_variation(f, g, -1, 4, 1e-3), 1.0, 1e-2);
}
