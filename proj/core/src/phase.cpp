#include "kqse/phase.hpp"

#include <cmath>

#include "kqse/errors.hpp"

namespace kqse {

PhaseSetting optical_to_symplectic(const OpticalSetting& o) {
  if (o.r == 0.0) throw DegenerateSettingError("optical setting with r = 0");
  return {o.r * std::cos(o.theta), o.r * std::sin(o.theta)};
}

}  // namespace kqse
