#include "regsmc/types.hpp"

#include <cmath>
#include <stdexcept>

namespace regsmc {

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::Original: return "original";
    case SystemKind::MaxReg: return "maxreg";
    case SystemKind::AddReg: return "addreg";
  }
  return "unknown";
}

std::optional<SystemKind> parse_system_kind(std::string_view name) {
  if (name == "original") return SystemKind::Original;
  if (name == "maxreg") return SystemKind::MaxReg;
  if (name == "addreg") return SystemKind::AddReg;
  return std::nullopt;
}

bool is_finite(const State& s) { return std::isfinite(s.x1) && std::isfinite(s.x2); }

void validate(const SystemParams& p, SystemKind kind) {
  if (!(std::isfinite(p.gamma) && p.gamma > 0.0)) {
    throw std::invalid_argument("gamma must be finite and > 0");
  }
  if (kind != SystemKind::Original && !(std::isfinite(p.mu) && p.mu > 0.0)) {
    throw std::invalid_argument("mu must be finite and > 0 for regularized systems");
  }
  if (!(std::isfinite(p.dist_bound) && p.dist_bound >= 0.0)) {
    throw std::invalid_argument("dist_bound must be finite and >= 0");
  }
}

}  // namespace regsmc
