#include "regsmc/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "regsmc/kernels/scalar_ops.hpp"

namespace regsmc {
namespace {

void require_finite(State s) {
  if (!is_finite(s)) throw std::domain_error("state must be finite");
}

void require_gain(double gamma) {
  if (!(std::isfinite(gamma) && gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
}

void require_radius(double mu) {
  if (!(std::isfinite(mu) && mu > 0.0)) throw std::invalid_argument("mu must be > 0");
}

}  // namespace

double control_original(State s, double gamma) {
  require_finite(s);
  require_gain(gamma);
  return ops::control_original(s.x1, s.x2, gamma);
}

double control_maxreg(State s, double gamma, double mu) {
  require_finite(s);
  require_gain(gamma);
  require_radius(mu);
  return ops::control_maxreg(s.x1, s.x2, gamma, mu);
}

double control_addreg(State s, double gamma, double mu) {
  require_finite(s);
  require_gain(gamma);
  require_radius(mu);
  return ops::control_addreg(s.x1, s.x2, gamma, mu);
}

double control(SystemKind kind, State s, const SystemParams& p) {
  switch (kind) {
    case SystemKind::Original: return control_original(s, p.gamma);
    case SystemKind::MaxReg: return control_maxreg(s, p.gamma, p.mu);
    case SystemKind::AddReg: return control_addreg(s, p.gamma, p.mu);
  }
  throw std::invalid_argument("unknown system kind");
}

Derivative vector_field(SystemKind kind, State s, const SystemParams& p, double d) {
  if (!std::isfinite(d)) throw std::domain_error("disturbance must be finite");
  return {s.x2, control(kind, s, p) + d};
}

Matrix2 linearized_matrix(const SystemParams& p) {
  require_gain(p.gamma);
  require_radius(p.mu);
  return {{{0.0, 1.0}, {-p.gamma / p.mu, 0.0}}};
}

}  // namespace regsmc
