#pragma once

#include <array>

#include "regsmc/types.hpp"

namespace regsmc {

/// Time derivative of the state, (dx1/dt, dx2/dt).
using Derivative = State;

using Matrix2 = std::array<std::array<double, 2>, 2>;

// Control laws. All throw std::domain_error on a non-finite state and
// std::invalid_argument on gamma <= 0 or mu <= 0.

/// -|x1|^-1 (gamma x1 + |x2| x2) for x1 != 0, and 0 at x1 == 0.
double control_original(State s, double gamma);
/// -max{mu, |x1|}^-1 (gamma x1 + |x2| x2).
double control_maxreg(State s, double gamma, double mu);
/// -(|x1| + mu)^-1 (gamma x1 + |x2| x2).
double control_addreg(State s, double gamma, double mu);

double control(SystemKind kind, State s, const SystemParams& p);

/// (x2, u(s) + d). The disturbance only enters here, never in the control laws.
Derivative vector_field(SystemKind kind, State s, const SystemParams& p, double d);

/// Linearization of the inner (|x1| < mu) dynamics at the origin:
/// [[0, 1], [-gamma/mu, 0]], a harmonic oscillator at sqrt(gamma/mu).
Matrix2 linearized_matrix(const SystemParams& p);

}  // namespace regsmc
