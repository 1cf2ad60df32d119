#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "golden.hpp"
#include "kqse/error_bounds.hpp"

using namespace kqse;

TEST(ErrorBounds, Truncation) {
  EXPECT_NEAR(truncation_bound({}, 6.0), test::golden_real("truncation_C1_tau0.5_mu6"), 1e-16);
}

TEST(ErrorBounds, Discretization) {
  const double want = test::golden_real("discretization_M1_tau0.5_N160_mu8");
  EXPECT_NEAR(discretization_bound({}, 160, 8.0), want, 1e-12 * want);
  ErrorBoundParams flat;
  flat.tau = 0.0;
  EXPECT_EQ(discretization_bound(flat, 160, 8.0), std::numeric_limits<double>::infinity());
}

TEST(ErrorBounds, Estimation) {
  EXPECT_NEAR(estimation_bound(6.0, 500), test::golden_real("estimation_mu6_n500"), 1e-16);
  EXPECT_NEAR(estimation_bound(6.0, 500), 7.295e-3, 1e-6);
}

TEST(ErrorBounds, TotalIsComposition) {
  const double want = test::golden_real("total_C1_tau0.5_mu8_N160_n500");
  EXPECT_NEAR(total_bound({}, 8.0, 160, 500), want, 1e-14);
  const ErrorBoundParams p;
  const double t = truncation_bound(p, 8.0);
  const double d = discretization_bound(p, 160, 8.0);
  EXPECT_DOUBLE_EQ(total_bound(p, 8.0, 160, 500), 3 * (t * t + d * d + estimation_bound(8.0, 500)));
}

TEST(ErrorBounds, OverlapTruncation) {
  EXPECT_NEAR(overlap_truncation_bound(0.25, 2.0, 2.0), std::exp(-4.0), 1e-16);
  EXPECT_NEAR(overlap_truncation_bound(0.25, 2.0, 1.0), std::exp(-1.0), 1e-16);
}

TEST(DecayFit, RecoversRates) {
  std::vector<double> mu;
  std::vector<double> lin;
  std::vector<double> quad;
  for (int k = -30; k <= 30; ++k) {
    const double m = 0.2 * k;
    mu.push_back(m);
    lin.push_back(2.0 * std::exp(-0.7 * std::abs(m)));
    quad.push_back(std::exp(-4 * 0.3 * m * m));
  }
  const auto a = fit_tau(mu, lin);
  EXPECT_NEAR(a.rate, 0.7, 1e-12);
  EXPECT_NEAR(a.log_prefactor, std::log(2.0), 1e-12);
  EXPECT_GT(a.points, 2u);
  EXPECT_NEAR(fit_beta(mu, quad).rate, 0.3, 1e-12);
}
