#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

#include "kqse/errors.hpp"
#include "kqse/parallel.hpp"
#include "kqse/sampling.hpp"
#include "kqse/seeding.hpp"
#include "kqse/stats.hpp"

using namespace kqse;

namespace {

// CDF by cumulative trapezoid on a fine grid, independent of the sampler table.
struct ReferenceCdf {
  double lo;
  double step;
  std::vector<double> f;

  ReferenceCdf(const ReferenceState& st, const PhaseSetting& s, double lo_, double hi)
      : lo(lo_), step(1e-3) {
    const auto n = static_cast<std::size_t>((hi - lo) / step) + 1;
    f.resize(n);
    double prev = tomogram(st, s, lo);
    f[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double cur = tomogram(st, s, lo + step * static_cast<double>(i));
      f[i] = f[i - 1] + 0.5 * step * (prev + cur);
      prev = cur;
    }
  }

  double operator()(double x) const {
    const double u = (x - lo) / step;
    if (u <= 0) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    if (i + 1 >= f.size()) return f.back();
    return f[i] + (u - static_cast<double>(i)) * (f[i + 1] - f[i]);
  }
};

}  // namespace

TEST(Sampler, KolmogorovSmirnovAgainstCatTomogram) {
  const auto st = ReferenceState::cat({1.0, 0.5});
  for (const PhaseSetting s : {PhaseSetting{0.8, 1.2}, PhaseSetting{-2.0, 0.3}}) {
    const auto sampler = build_sampler(st, s);
    const auto batch = draw(sampler, 20000, 11);
    const ReferenceCdf cdf(st, s, -20.0, 20.0);
    // critical value at level 1e-3
    EXPECT_LT(ks_statistic(batch.values, cdf), 1.95 / std::sqrt(20000.0));
  }
}

TEST(Sampler, TableAccuracy) {
  const auto sampler = build_sampler(ReferenceState::cat({1.0, 0.5}), {0.8, 1.2});
  EXPECT_GE(sampler.captured_mass(), kMinCapturedMass);
  EXPECT_LE(sampler.interpolation_error(), kMaxCdfInterpolationError);
  EXPECT_DOUBLE_EQ(sampler.cdf(sampler.lo() - 1.0), 0.0);
  EXPECT_DOUBLE_EQ(sampler.cdf(sampler.hi() + 1.0), 1.0);
  for (double u : {0.01, 0.3, 0.5, 0.97}) EXPECT_NEAR(sampler.cdf(sampler.quantile(u)), u, 1e-9);
}

TEST(Sampler, GroundStateVariance) {
  const auto sampler = build_sampler(ReferenceState::fock(0), {1.0, 0.0});
  const auto b = draw(sampler, 1000000, 3);
  EXPECT_NEAR(mean(b.values), 0.0, 0.005);
  EXPECT_NEAR(sample_variance(b.values), 0.5, 0.01);
}

TEST(Sampler, DeterministicPerSeed) {
  const auto sampler = build_sampler(ReferenceState::coherent({0.3, 0.2}), {0.5, 0.5});
  const auto a = draw(sampler, 1000, 42);
  const auto b = draw(sampler, 1000, 42);
  const auto c = draw(sampler, 1000, 43);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(a.seed, 42u);
  EXPECT_EQ(a.state_tag, "coherent:0.3+0.2i");
}

TEST(Sampler, OriginIsPointMass) {
  const auto sampler = build_sampler(ReferenceState::cat({1.0, 0.5}), {0.0, 0.0});
  EXPECT_TRUE(sampler.is_point_mass());
  const auto b = draw(sampler, 100, 1);
  EXPECT_TRUE(std::all_of(b.values.begin(), b.values.end(), [](double v) { return v == 0.0; }));
}

TEST(Sampler, RejectsSmallGridAndSupport) {
  const auto st = ReferenceState::fock(0);
  EXPECT_THROW(build_sampler(st, {1.0, 0.0}, Support{-8, 8}, 100), ConfigError);
  EXPECT_THROW(build_sampler(st, {1.0, 0.0}, Support{-1, 1}, 4096), SupportTooSmallError);
}

TEST(Noise, MixtureVariance) {
  const auto sampler = build_sampler(ReferenceState::fock(0), {1.0, 0.0});
  const auto x = draw(sampler, 1000000, 5);
  const NoiseModel nm{0.85, 0.0, 1.0};
  const auto z = mix_noise(x, nm, 6);
  EXPECT_NEAR(sample_variance(z.values), 0.85 * 0.85 * 0.5 + 0.15 * 0.15, 0.005);
  EXPECT_EQ(z.noise_tag, nm.tag());
  EXPECT_EQ(z.noise_seed, 6u);
}

TEST(Noise, ZeroVarianceIsExactShift) {
  const auto sampler = build_sampler(ReferenceState::fock(1), {1.0, 1.0});
  const auto x = draw(sampler, 100, 5);
  const NoiseModel nm{0.6, 2.0, 0.0};
  const auto z = mix_noise(x, nm, 1);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(z.values[i], 0.6 * x.values[i] + 0.4 * 2.0);
}

TEST(Noise, Validation) {
  EXPECT_THROW((NoiseModel{0.0, 0.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((NoiseModel{1.0, 0.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((NoiseModel{0.5, 0.0, -1.0}.validate()), ConfigError);
  EXPECT_NO_THROW((NoiseModel{0.5, 0.0, 0.0}.validate()));
}

TEST(Noise, CharacteristicFunction) {
  const NoiseModel nm{0.85, 0.5, 2.0};
  const cplx v = nm.noise_cf(1.5);
  EXPECT_NEAR(std::abs(v), std::exp(-2.0 * 2.25 / 2), 1e-15);
  EXPECT_NEAR(std::arg(v), 0.75, 1e-15);
}

TEST(Seeding, StreamsAndCountersDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 50; ++s) {
    for (std::uint64_t r = 0; r < 20; ++r) {
      for (auto st : {Stream::Signal, Stream::Noise, Stream::Pilot}) {
        seen.insert(derive_seed(7, s, r, st));
      }
    }
  }
  EXPECT_EQ(seen.size(), 50u * 20u * 3u);
  EXPECT_EQ(derive_seed(7, 3, 4), derive_seed(7, 3, 4, Stream::Signal));
  EXPECT_NE(derive_seed(7, 3, 4), derive_seed(8, 3, 4));
}

TEST(Seeding, UniformRange) {
  Engine e(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(e);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Parallel, SameResultsForAnyWorkerCount) {
  auto run = [](unsigned workers) {
    std::vector<std::uint64_t> out(200);
    parallel_for(out.size(), workers, [&](std::size_t i) {
      Engine e(derive_seed(1, i, 0));
      out[i] = e();
    });
    return out;
  };
  EXPECT_EQ(run(1), run(4));
  EXPECT_EQ(run(1), run(0));
}

TEST(Parallel, PropagatesException) {
  std::atomic<int> ran{0};
  EXPECT_THROW(parallel_for(100, 3,
                            [&](std::size_t i) {
                              ++ran;
                              if (i == 17) throw DegenerateSampleError("boom");
                            }),
               DegenerateSampleError);
  EXPECT_GT(ran.load(), 0);
}
