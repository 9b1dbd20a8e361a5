#pragma once

// Unchecked scalar arithmetic shared by the public evaluators and the
// scalar batch kernels. The SIMD kernels reproduce these operation orders
// exactly, so any edit here must be mirrored in kernels_avx2.cpp.

#include <algorithm>
#include <cmath>

#include "regsmc/types.hpp"

namespace regsmc::ops {

inline double feedback_numerator(double x1, double x2, double gamma) {
  return gamma * x1 + std::fabs(x2) * x2;
}

// Controls are written 0 - q so that a zero control is +0, never -0.

inline double control_original(double x1, double x2, double gamma) {
  // x1 == 0: -gamma * sgn(0) with sgn(0) = 0; the |x2|x2 term is absent there.
  if (x1 == 0.0) return 0.0;
  return 0.0 - (feedback_numerator(x1, x2, gamma) / std::fabs(x1));
}

inline double control_maxreg(double x1, double x2, double gamma, double mu) {
  return 0.0 - (feedback_numerator(x1, x2, gamma) / std::max(mu, std::fabs(x1)));
}

inline double control_addreg(double x1, double x2, double gamma, double mu) {
  return 0.0 - (feedback_numerator(x1, x2, gamma) / (std::fabs(x1) + mu));
}

inline double control(SystemKind kind, double x1, double x2, double gamma, double mu) {
  switch (kind) {
    case SystemKind::Original: return control_original(x1, x2, gamma);
    case SystemKind::MaxReg: return control_maxreg(x1, x2, gamma, mu);
    case SystemKind::AddReg: return control_addreg(x1, x2, gamma, mu);
  }
  return 0.0;
}

/// z(x1) = int_0^x1 s / max{mu, |s|} ds.
inline double z_integral(double x1, double mu) {
  const double a = std::fabs(x1);
  if (a < mu) return (x1 * x1) / (2.0 * mu);
  return a - 0.5 * mu;
}

/// E = gamma z(x1) + x2^2 / 2, the MaxReg energy.
inline double energy_maxreg(double x1, double x2, double gamma, double mu) {
  return gamma * z_integral(x1, mu) + 0.5 * (x2 * x2);
}

}  // namespace regsmc::ops
