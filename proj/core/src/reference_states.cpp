#include "kqse/reference_states.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "kqse/errors.hpp"
#include "kqse/special_functions.hpp"

namespace kqse {
namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kResidueTolerance = 1e-10;

cplx root_of_unity(int j) {
  return std::polar(1.0, 2.0 * std::numbers::pi * j / 3.0);
}

void require_nondegenerate(const PhaseSetting& s) {
  if (s.degenerate()) {
    throw DegenerateSettingError("tomogram undefined at mu = nu = 0");
  }
}

double ground_tomogram(double x, double alpha2) {
  return std::exp(-x * x / alpha2) / std::sqrt(std::numbers::pi * alpha2);
}

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_complex(cplx a) {
  std::string out = shortest(a.real());
  if (a.imag() != 0.0) {
    if (a.imag() >= 0.0) out += '+';
    out += shortest(a.imag()) + 'i';
  }
  return out;
}

double parse_double(std::string_view text, const std::string& whole) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("cannot parse number '" + std::string(text) + "' in state tag '" +
                      whole + "'");
  }
  return v;
}

cplx parse_complex(std::string_view text, const std::string& whole) {
  if (text.empty()) throw ConfigError("empty amplitude in state tag '" + whole + "'");
  if (text.back() != 'i') return {parse_double(text, whole), 0.0};
  text.remove_suffix(1);
  // split at the last sign that is not an exponent sign and not leading
  std::size_t split = std::string_view::npos;
  for (std::size_t i = text.size(); i-- > 1;) {
    if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) {
    if (text.empty() || text == "+" || text == "-") {
      return {0.0, text == "-" ? -1.0 : 1.0};
    }
    return {0.0, parse_double(text, whole)};
  }
  const double re = parse_double(text.substr(0, split), whole);
  std::string_view im_text = text.substr(split);
  double im = 0.0;
  if (im_text == "+") {
    im = 1.0;
  } else if (im_text == "-") {
    im = -1.0;
  } else {
    if (im_text.front() == '+') im_text.remove_prefix(1);
    im = parse_double(im_text, whole);
  }
  return {re, im};
}

cplx sum_cat_terms(const detail::CatTerms& terms, double x,
                   const std::array<std::array<bool, 3>, 3>* keep, double* abs_sum) {
  cplx total = 0.0;
  double mag = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (keep != nullptr && !(*keep)[j][k]) continue;
      const cplx term = std::exp(kI * x * terms.s[j][k] + terms.d[j][k]);
      total += term;
      mag += std::abs(term);
    }
  }
  if (abs_sum != nullptr) *abs_sum = mag;
  return total;
}

}  // namespace

ReferenceState::ReferenceState(FockState s) : v_(s) {
  if (s.m < 0 || s.m > kMaxPolynomialOrder) {
    throw UnsupportedOrderError("Fock number " + std::to_string(s.m) + " not supported");
  }
}

ReferenceState::ReferenceState(CatState s) : v_(s), norm2_(cat_normalization(s.a)) {}

bool ReferenceState::is_ground_state() const {
  if (const auto* f = std::get_if<FockState>(&v_)) return f->m == 0;
  if (const auto* c = std::get_if<CoherentState>(&v_)) return c->a == cplx(0.0, 0.0);
  return false;
}

std::string ReferenceState::tag() const {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FockState>) {
          return "fock:" + std::to_string(s.m);
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          return "coherent:" + format_complex(s.a);
        } else {
          return "ccs:" + format_complex(s.a);
        }
      },
      v_);
}

ReferenceState ReferenceState::parse(const std::string& tag) {
  const auto colon = tag.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("state tag '" + tag + "' must look like kind:parameter");
  }
  const std::string kind = tag.substr(0, colon);
  const std::string_view arg = std::string_view(tag).substr(colon + 1);
  if (kind == "fock") {
    int m = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), m);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw ConfigError("bad Fock number in state tag '" + tag + "'");
    }
    return fock(m);
  }
  if (kind == "coherent") return coherent(parse_complex(arg, tag));
  if (kind == "ccs" || kind == "cat") return cat(parse_complex(arg, tag));
  throw ConfigError("unknown state kind '" + kind + "' (expected fock, coherent or ccs)");
}

double cat_normalization(cplx a) {
  const double a2 = std::norm(a);
  cplx inv = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      inv += std::exp(-a2 + a2 * root_of_unity(k - j));
    }
  }
  return 1.0 / inv.real();
}

namespace detail {

std::pair<cplx, cplx> coherent_terms(cplx a, const PhaseSetting& st) {
  const double alpha2 = st.alpha2();
  const cplx plus(st.nu, st.mu);    // nu + i mu
  const cplx minus(st.nu, -st.mu);  // nu - i mu
  const cplx s = std::sqrt(2.0) * (minus * std::conj(a) - plus * a) / alpha2;
  const cplx d = -std::norm(a) +
                 (plus * plus * a * a + minus * minus * std::conj(a) * std::conj(a)) /
                     (2.0 * alpha2);
  return {s, d};
}

CatTerms cat_terms(cplx a, const PhaseSetting& st) {
  const double alpha2 = st.alpha2();
  const cplx plus(st.nu, st.mu);
  const cplx minus(st.nu, -st.mu);
  CatTerms t;
  for (int j = 0; j < 3; ++j) {
    const cplx aj = a * root_of_unity(j);
    for (int k = 0; k < 3; ++k) {
      const cplx ak_conj = std::conj(a * root_of_unity(k));
      t.s[j][k] = std::sqrt(2.0) * (minus * ak_conj - plus * aj) / alpha2;
      t.d[j][k] = -std::norm(a) +
                  (plus * plus * aj * aj + minus * minus * ak_conj * ak_conj) / (2.0 * alpha2);
    }
  }
  return t;
}

cplx cat_tomogram_partial(cplx a, const PhaseSetting& s, double x,
                          const std::array<std::array<bool, 3>, 3>& keep, double norm2) {
  require_nondegenerate(s);
  const auto terms = cat_terms(a, s);
  return ground_tomogram(x, s.alpha2()) * norm2 * sum_cat_terms(terms, x, &keep, nullptr);
}

}  // namespace detail

double tomogram(const ReferenceState& state, const PhaseSetting& s, double x) {
  require_nondegenerate(s);
  const double alpha2 = s.alpha2();
  return std::visit(
      [&](const auto& st) -> double {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, FockState>) {
          const double alpha = std::sqrt(alpha2);
          const double psi = hermite_function(st.m, x / alpha);
          return psi * psi / alpha;
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          const auto [sc, d] = detail::coherent_terms(st.a, s);
          if (std::abs(sc.real()) > 1e-12 * (1.0 + std::abs(sc))) {
            throw NumericalGateError("coherent tomogram exponent s is not purely imaginary");
          }
          return ground_tomogram(x, alpha2) * std::exp(kI * x * sc + d).real();
        } else {
          const auto terms = detail::cat_terms(st.a, s);
          double mag = 0.0;
          const cplx total = sum_cat_terms(terms, x, nullptr, &mag);
          if (std::abs(total.imag()) > kResidueTolerance * mag) {
            throw NumericalGateError("cat tomogram imaginary residue above tolerance");
          }
          const double w = ground_tomogram(x, alpha2) * state.norm2() * total.real();
          return w > 0.0 ? w : 0.0;
        }
      },
      state.variant());
}

std::vector<double> tomogram_grid(const ReferenceState& state, const PhaseSetting& s, double lo,
                                  double step, std::size_t count) {
  require_nondegenerate(s);
  std::vector<double> out(count);
  const auto* cat = std::get_if<CatState>(&state.variant());
  if (cat == nullptr) {
    for (std::size_t i = 0; i < count; ++i) out[i] = tomogram(state, s, lo + step * i);
    return out;
  }
  // exp(i x s_jk + d_jk) advanced by a fixed ratio, re-anchored every block
  constexpr std::size_t kBlock = 64;
  const double alpha2 = s.alpha2();
  const auto terms = detail::cat_terms(cat->a, s);
  std::array<cplx, 9> ratio{};
  std::array<cplx, 9> cur{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) ratio[3 * j + k] = std::exp(kI * step * terms.s[j][k]);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double x = lo + step * i;
    if (i % kBlock == 0) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) cur[3 * j + k] = std::exp(kI * x * terms.s[j][k] + terms.d[j][k]);
      }
    }
    cplx total = 0.0;
    double mag = 0.0;
    for (std::size_t q = 0; q < 9; ++q) {
      total += cur[q];
      mag += std::abs(cur[q]);
      cur[q] *= ratio[q];
    }
    if (std::abs(total.imag()) > kResidueTolerance * mag) {
      throw NumericalGateError("cat tomogram imaginary residue above tolerance");
    }
    const double w = ground_tomogram(x, alpha2) * state.norm2() * total.real();
    out[i] = w > 0.0 ? w : 0.0;
  }
  return out;
}

cplx cf(const ReferenceState& state, double t, const PhaseSetting& s) {
  const double alpha2 = s.alpha2();
  if (alpha2 == 0.0 || t == 0.0) return {1.0, 0.0};
  return std::visit(
      [&](const auto& st) -> cplx {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, FockState>) {
          const double u = t * t * alpha2;
          return {std::exp(-u / 4.0) * laguerre(st.m, u / 2.0), 0.0};
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          const auto [sc, d] = detail::coherent_terms(st.a, s);
          return std::exp(-(t + sc) * (t + sc) * alpha2 / 4.0 + d);
        } else {
          const auto terms = detail::cat_terms(st.a, s);
          cplx total = 0.0;
          for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
              const cplx ts = t + terms.s[j][k];
              total += std::exp(-ts * ts * alpha2 / 4.0 + terms.d[j][k]);
            }
          }
          return state.norm2() * total;
        }
      },
      state.variant());
}

cplx coherent_wavefunction(cplx a, double x) {
  const double pref = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  return pref * std::exp(-0.5 * x * x - 0.5 * std::norm(a) + std::sqrt(2.0) * a * x -
                         0.5 * a * a);
}

cplx density_kernel(const ReferenceState& state, double y, double yp) {
  return std::visit(
      [&](const auto& st) -> cplx {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, FockState>) {
          return {hermite_function(st.m, y) * hermite_function(st.m, yp), 0.0};
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          return coherent_wavefunction(st.a, y) * std::conj(coherent_wavefunction(st.a, yp));
        } else {
          std::array<cplx, 3> left{};
          std::array<cplx, 3> right{};
          for (int j = 0; j < 3; ++j) {
            const cplx aj = st.a * root_of_unity(j);
            left[j] = coherent_wavefunction(aj, y);
            right[j] = std::conj(coherent_wavefunction(aj, yp));
          }
          cplx total = 0.0;
          for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) total += left[j] * right[k];
          }
          return state.norm2() * total;
        }
      },
      state.variant());
}

QuadratureMoments quadrature_moments(const ReferenceState& state, const PhaseSetting& s) {
  const double alpha2 = s.alpha2();
  return std::visit(
      [&](const auto& st) -> QuadratureMoments {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, FockState>) {
          return {0.0, std::sqrt(alpha2 * (2.0 * st.m + 1.0) / 2.0)};
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          const double mean = std::sqrt(2.0) * (s.mu * st.a.real() + s.nu * st.a.imag());
          return {mean, std::sqrt(alpha2 / 2.0)};
        } else {
          // moments from central differences of the characteristic function
          const double h = 1e-3 / std::max(1.0, std::sqrt(alpha2));
          const cplx fp = cf(state, h, s);
          const cplx fm = cf(state, -h, s);
          const double mean = (fp - fm).imag() / (2.0 * h);
          const double second = -(fp + fm - 2.0).real() / (h * h);
          const double var = std::max(second - mean * mean, alpha2 / 2.0);
          return {mean, std::sqrt(var)};
        }
      },
      state.variant());
}

}  // namespace kqse
