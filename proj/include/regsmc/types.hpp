#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace regsmc {

/// Plant state: position and velocity of the double integrator.
struct State {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

/// Which closed loop is being simulated.
///  Original: quasi-continuous controller, singular at x1 = 0.
///  MaxReg:   gain |x1|^-1 replaced by max{mu, |x1|}^-1.
///  AddReg:   gain |x1|^-1 replaced by (|x1| + mu)^-1.
enum class SystemKind { Original, MaxReg, AddReg };

struct SystemParams {
  double gamma = 100.0;     // control gain
  double mu = 0.01;         // regularization radius (ignored by Original)
  double dist_bound = 0.0;  // D, sup-norm bound on the disturbance

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

std::string_view to_string(SystemKind kind);
std::optional<SystemKind> parse_system_kind(std::string_view name);

bool is_finite(const State& s);

// Throws std::invalid_argument naming the offending field.
void validate(const SystemParams& p, SystemKind kind);

}  // namespace regsmc
