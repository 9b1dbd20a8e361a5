#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "regsmc/acceptance.hpp"
#include "regsmc/analysis.hpp"
#include "regsmc/config.hpp"

namespace regsmc {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitIo = 4,
};

/// Predicted-vs-measured rows for a finished run, chosen by system and
/// disturbance kind. Measured-only rows carry predicted = NaN.
std::vector<MetricRow> scenario_metrics(const Scenario& sc, const SteadyState& ss,
                                        const std::string& label);

/// Output path without a trailing ".csv".
std::string output_stem(const std::string& path);

/// Writes the trajectory CSV, `<stem>.metrics.csv`, and with cfg.plot a
/// gnuplot script `<stem>.gp`. Prints the metrics table to out.
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Runs all three systems from the same data; writes
/// `<stem>_original.csv`, `<stem>_maxreg.csv`, `<stem>_addreg.csv` and prints
/// a chattering table over the trailing window (1 s unless set).
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct SweepSpec {
  std::string param;           // mu | gamma | amplitude
  std::vector<double> values;
  std::vector<double> paired_amplitudes;  // empty, or one per value
  RunConfig base;
};

/// Throws ConfigError on an unknown parameter, an empty list or a pairing
/// length mismatch.
void validate(const SweepSpec& spec);

/// One CSV row per value: `param,value,predicted,measured,rel_err`. Failed
/// runs are recorded with NaN fields and make the exit status nonzero.
int cmd_sweep(const SweepSpec& spec, const std::string& out_path, std::ostream& out,
              std::ostream& err);

int cmd_verify(const AcceptanceOptions& opt, std::span<const int> ids, std::ostream& out);

}  // namespace regsmc
