#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kqse/phase.hpp"

namespace kqse {

using cplx = std::complex<double>;

struct FockState {
  int m = 0;
};

struct CoherentState {
  cplx a{0.0, 0.0};
};

// Three-component coherent cat state: N_c sum_j |a e^{2 pi i (j-1)/3}>.
struct CatState {
  cplx a{1.0, 0.5};
};

// Analytic state with closed-form tomogram, characteristic function and
// coordinate density kernel. Value type; cheap to copy.
class ReferenceState {
 public:
  using Variant = std::variant<FockState, CoherentState, CatState>;

  ReferenceState(FockState s);
  ReferenceState(CoherentState s) : v_(s) {}
  ReferenceState(CatState s);

  static ReferenceState fock(int m) { return ReferenceState(FockState{m}); }
  static ReferenceState coherent(cplx a) { return ReferenceState(CoherentState{a}); }
  static ReferenceState cat(cplx a) { return ReferenceState(CatState{a}); }

  const Variant& variant() const { return v_; }
  bool is_ground_state() const;

  // Human readable tag, e.g. "fock:1", "coherent:1+0.5i", "ccs:1+0.5i".
  std::string tag() const;
  // Inverse of tag(). Throws ConfigError on malformed input.
  static ReferenceState parse(const std::string& tag);

  // |N_c|^2 for cat states, 1 otherwise.
  double norm2() const { return norm2_; }

 private:
  Variant v_;
  double norm2_ = 1.0;
};

// |N_c|^{-2} = sum_{j,k} exp(-|a|^2 + |a|^2 e^{2 pi i (k-j)/3}); returns |N_c|^2.
double cat_normalization(cplx a);

// Tomogram W(x | mu, nu). Throws DegenerateSettingError at mu = nu = 0.
double tomogram(const ReferenceState& state, const PhaseSetting& s, double x);

// Tomogram on the uniform grid x_i = lo + i * step, i < count. Same values as
// tomogram() up to rounding; cheaper for cat states.
std::vector<double> tomogram_grid(const ReferenceState& state, const PhaseSetting& s, double lo,
                                  double step, std::size_t count);

// Characteristic function phi(t; mu, nu) = E[exp(i t X_{mu,nu})].
// Defined at the origin of the parameter plane as well (phi = 1).
cplx cf(const ReferenceState& state, double t, const PhaseSetting& s);

// Coordinate representation rho(y, y') = <y| rho |y'>.
cplx density_kernel(const ReferenceState& state, double y, double yp);

// Coherent-state wavefunction <x|a>.
cplx coherent_wavefunction(cplx a, double x);

// Mean and standard deviation of the quadrature X_{mu,nu}; used to size sampler supports.
struct QuadratureMoments {
  double mean = 0.0;
  double stddev = 0.0;
};
QuadratureMoments quadrature_moments(const ReferenceState& state, const PhaseSetting& s);

namespace detail {

// Exponents of the (j, k) cross term of the cat tomogram:
// term_jk(x) = W_0(x|alpha) exp(i x s_jk + d_jk). Index 0 corresponds to j = 1.
struct CatTerms {
  std::array<std::array<cplx, 3>, 3> s{};
  std::array<std::array<cplx, 3>, 3> d{};
};
CatTerms cat_terms(cplx a, const PhaseSetting& s);

// Single coherent-state exponents (s, d) of the coherent tomogram.
std::pair<cplx, cplx> coherent_terms(cplx a, const PhaseSetting& s);

// Cat tomogram restricted to the listed (j, k) terms, without the imaginary
// residue gate. Used to check the reduction to the coherent tomogram.
cplx cat_tomogram_partial(cplx a, const PhaseSetting& s, double x,
                          const std::array<std::array<bool, 3>, 3>& keep,
                          double norm2);

}  // namespace detail
}  // namespace kqse
