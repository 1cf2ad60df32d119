#include <gtest/gtest.h>

#include <cmath>

#include "golden.hpp"
#include "kqse/errors.hpp"
#include "kqse/reference_states.hpp"
#include "kqse/special_functions.hpp"

using namespace kqse;

namespace {

const cplx kA{1.0, 0.5};

std::vector<ReferenceState> states() {
  return {ReferenceState::fock(0), ReferenceState::fock(1), ReferenceState::fock(3),
          ReferenceState::coherent(kA), ReferenceState::coherent({-0.7, 1.2}),
          ReferenceState::cat(kA), ReferenceState::cat({0.3, -1.1})};
}

std::vector<PhaseSetting> settings() {
  return {{1.0, 0.0}, {0.0, 1.0}, {0.8, 1.2}, {-2.0, 0.5}, {0.3, -0.4}};
}

// Integral of f over [-30, 30] by composite Simpson.
template <class F>
auto simpson(F f, double lo = -30.0, double hi = 30.0, int panels = 6000) {
  const double h = (hi - lo) / panels;
  auto s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * (h / 3.0);
}

}  // namespace

TEST(Tomogram, CatGoldenValue) {
  const double got = tomogram(ReferenceState::cat(kA), {0.8, 1.2}, 1.0);
  EXPECT_NEAR(got, test::golden_real("ccs_tomogram_a1+0.5i_mu0.8_nu1.2_x1"), 1e-10);
}

TEST(Tomogram, CatNormalizationConstant) {
  const double n = test::golden_real("ccs_norm_abs");
  EXPECT_NEAR(cat_normalization(kA), n * n, 1e-12);
}

TEST(Tomogram, IntegratesToOne) {
  for (const auto& st : states()) {
    for (const auto& s : settings()) {
      const double mass = simpson([&](double x) { return tomogram(st, s, x); });
      EXPECT_NEAR(mass, 1.0, 1e-9) << st.tag() << " at " << s.mu << "," << s.nu;
    }
  }
}

TEST(Tomogram, NonNegative) {
  for (const auto& st : states()) {
    for (const auto& s : settings()) {
      for (double x = -8; x <= 8; x += 0.05) EXPECT_GE(tomogram(st, s, x), 0.0);
    }
  }
}

TEST(Tomogram, GridMatchesPointwise) {
  for (const auto& st : states()) {
    const PhaseSetting s{0.8, 1.2};
    const auto g = tomogram_grid(st, s, -7.0, 0.01, 1401);
    for (std::size_t i = 0; i < g.size(); i += 7) {
      const double x = -7.0 + 0.01 * static_cast<double>(i);
      EXPECT_NEAR(g[i], tomogram(st, s, x), 1e-12) << st.tag() << " x=" << x;
    }
  }
}

TEST(Tomogram, Homogeneity) {
  for (const auto& st : states()) {
    for (const auto& s : settings()) {
      for (double lambda : {2.0, -1.5, 0.3}) {
        for (double x : {-1.2, 0.0, 0.9}) {
          const PhaseSetting scaled{lambda * s.mu, lambda * s.nu};
          EXPECT_NEAR(tomogram(st, scaled, lambda * x), tomogram(st, s, x) / std::abs(lambda),
                      1e-12)
              << st.tag();
        }
      }
    }
  }
}

TEST(Tomogram, FockIsScaledEigenfunction) {
  const PhaseSetting s{0.6, -1.3};
  const double alpha = std::hypot(s.mu, s.nu);
  for (int m : {0, 1, 3}) {
    for (double x : {-2.0, 0.1, 1.7}) {
      const double psi = hermite_function(m, x / alpha);
      EXPECT_NEAR(tomogram(ReferenceState::fock(m), s, x), psi * psi / alpha, 1e-13);
    }
  }
}

TEST(Tomogram, CatReducesToCoherentForDiagonalTerm) {
  std::array<std::array<bool, 3>, 3> keep{};
  keep[0][0] = true;
  for (const auto& s : settings()) {
    for (double x : {-1.0, 0.4, 2.2}) {
      const cplx t = detail::cat_tomogram_partial(kA, s, x, keep, 1.0);
      EXPECT_NEAR(t.real(), tomogram(ReferenceState::coherent(kA), s, x), 1e-13);
      EXPECT_NEAR(t.imag(), 0.0, 1e-13);
    }
  }
}

TEST(Tomogram, DegenerateSettingThrows) {
  EXPECT_THROW(tomogram(ReferenceState::fock(0), {0.0, 0.0}, 0.0), DegenerateSettingError);
}

TEST(CharacteristicFunction, MatchesTomogramTransform) {
  for (const auto& st : states()) {
    const PhaseSetting s{0.8, 1.2};
    for (double t : {-1.7, 0.3, 1.0, 2.0}) {
      const cplx num = simpson([&](double x) { return tomogram(st, s, x) * std::polar(1.0, t * x); });
      EXPECT_LT(std::abs(num - cf(st, t, s)), 1e-9) << st.tag() << " t=" << t;
    }
  }
}

TEST(CharacteristicFunction, HermitianAndUnitAtOrigin) {
  for (const auto& st : states()) {
    for (const auto& s : settings()) {
      EXPECT_LT(std::abs(cf(st, -0.9, s) - std::conj(cf(st, 0.9, s))), 1e-14);
      EXPECT_LT(std::abs(cf(st, 0.0, s) - 1.0), 1e-15);
      EXPECT_LE(std::abs(cf(st, 1.0, s)), 1.0 + 1e-12);
    }
    EXPECT_EQ(cf(st, 1.0, {0.0, 0.0}), cplx(1.0));
  }
}

TEST(CharacteristicFunction, TimeScalingEqualsSettingScaling) {
  const auto st = ReferenceState::cat(kA);
  EXPECT_LT(std::abs(cf(st, 2.0, {0.4, 0.6}) - cf(st, 1.0, {0.8, 1.2})), 1e-14);
}

TEST(DensityKernel, CatGoldenValue) {
  const cplx got = density_kernel(ReferenceState::cat(kA), 1.5, 1.0);
  const cplx want = test::golden_complex("ccs_rho_1.5_1.0");
  EXPECT_LT(std::abs(got - want), 1e-12);
}

TEST(DensityKernel, HermitianWithUnitTrace) {
  for (const auto& st : states()) {
    for (double y : {-1.0, 0.2, 1.4}) {
      for (double yp : {-0.6, 0.0, 2.0}) {
        EXPECT_LT(std::abs(density_kernel(st, y, yp) - std::conj(density_kernel(st, yp, y))),
                  1e-14);
      }
    }
    const double tr = simpson([&](double y) { return density_kernel(st, y, y).real(); });
    EXPECT_NEAR(tr, 1.0, 1e-10) << st.tag();
  }
}

TEST(DensityKernel, DiagonalIsPositionTomogram) {
  for (const auto& st : states()) {
    for (double y : {-1.3, 0.0, 0.8}) {
      EXPECT_NEAR(density_kernel(st, y, y).real(), tomogram(st, {1.0, 0.0}, y), 1e-13);
    }
  }
}

TEST(QuadratureMoments, MatchTomogramMoments) {
  for (const auto& st : states()) {
    const PhaseSetting s{0.8, 1.2};
    const auto m = quadrature_moments(st, s);
    const double mean = simpson([&](double x) { return x * tomogram(st, s, x); });
    const double second = simpson([&](double x) { return x * x * tomogram(st, s, x); });
    EXPECT_NEAR(m.mean, mean, 1e-6) << st.tag();
    EXPECT_NEAR(m.stddev, std::sqrt(second - mean * mean), 1e-5) << st.tag();
  }
}

TEST(ReferenceStateTag, RoundTrip) {
  for (const auto& st : states()) {
    EXPECT_EQ(ReferenceState::parse(st.tag()).tag(), st.tag());
  }
  EXPECT_EQ(ReferenceState::parse("cat:1+0.5i").tag(), ReferenceState::cat(kA).tag());
  EXPECT_TRUE(ReferenceState::parse("fock:0").is_ground_state());
  EXPECT_TRUE(ReferenceState::parse("coherent:0").is_ground_state());
  EXPECT_FALSE(ReferenceState::parse("ccs:1+0.5i").is_ground_state());
}

TEST(ReferenceStateTag, MalformedTagsRejected) {
  for (const char* bad : {"", "fock", "fock:-1", "fock:x", "coherent:1+", "squeezed:1"}) {
    EXPECT_THROW(ReferenceState::parse(bad), Error) << bad;
  }
}
