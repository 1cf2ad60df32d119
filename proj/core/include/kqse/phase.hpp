#pragma once

namespace kqse {

// Quadrature direction (mu, nu): the observable mu*q + nu*p.
struct PhaseSetting {
  double mu = 0.0;
  double nu = 0.0;

  double alpha2() const { return mu * mu + nu * nu; }
  bool degenerate() const { return alpha2() == 0.0; }
  PhaseSetting operator-() const { return {-mu, -nu}; }
  friend bool operator==(const PhaseSetting&, const PhaseSetting&) = default;
};

// Homodyne (optical) parametrization: radius r and local-oscillator phase theta.
struct OpticalSetting {
  double r = 1.0;
  double theta = 0.0;
};

// mu = r cos(theta), nu = r sin(theta). Throws DegenerateSettingError for r == 0.
// The optical tomogram relates to the symplectic one through
// W(y | cos, sin) / |r| = W(x | mu, nu) with x = r y.
PhaseSetting optical_to_symplectic(const OpticalSetting& o);

}  // namespace kqse
