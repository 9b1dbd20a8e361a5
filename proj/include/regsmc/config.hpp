#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regsmc/sim.hpp"

namespace regsmc {

/// A config problem tied to a key and a line (0 = command-line override).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& what);
  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

struct RunConfig {
  Scenario scenario;
  std::string out = "trajectory.csv";
  std::size_t decimation = 1;
  double window = 2.0;  // trailing metric window, seconds; capped at t_end unless set
  bool window_explicit = false;
  int verbosity = 0;
  bool plot = false;
  std::vector<std::string> warnings;
};

using Override = std::pair<std::string, std::string>;

/// Flat `key = value` document, `#` comments, blank lines ignored.
///
/// Keys: system, gamma, mu, dist_bound, dt, t_end, x0_1, x0_2, dist_kind,
/// dist_amp, dist_onset, dist_freq, dist_table, out, decimation, window,
/// verbosity, plot. Defaults: system=maxreg, gamma=100, mu=0.01, dt=1e-5,
/// t_end=20, x0=(1,0), dist_kind=zero, dist_onset=5, dist_bound =
/// sup-norm of the disturbance. Overrides are applied after the file.
RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides = {});

RunConfig load_config(const std::string& path, const std::vector<Override>& overrides = {});

/// Splits "key=value"; throws ConfigError on a missing '='.
Override parse_override(std::string_view arg);

/// Name of the environment variable that overrides dt everywhere.
inline constexpr const char* kDtEnvVar = "REGSMC_DT";

/// Applies REGSMC_DT when set. Returns true if dt changed.
bool apply_env_overrides(RunConfig& cfg);

}  // namespace regsmc
