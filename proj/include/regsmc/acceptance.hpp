#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace regsmc {

struct AcceptanceOptions {
  double dt = 1e-5;
  // Negative control: added to the computed regularized-system threshold.
  double regularized_threshold_offset = 0.0;
};

/// Reads REGSMC_DT when set; otherwise the defaults.
AcceptanceOptions acceptance_options_from_env();

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::vector<std::string> details;  // one measured quantity per line
};

inline constexpr int kCriterionCount = 9;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);

/// Runs the given criteria (all when ids is empty), printing one
/// `[PASS]`/`[FAIL]` line per criterion plus indented details.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::span<const int> ids,
                                            std::ostream& out);

}  // namespace regsmc
