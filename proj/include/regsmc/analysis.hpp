#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regsmc/sim.hpp"
#include "regsmc/types.hpp"

namespace regsmc {

enum class BoundKind { ConstSteadyState, ResonantMaxX1, ResonantMaxX2, AddRegEquilibrium };

std::string_view to_string(BoundKind kind);

struct BoundPrediction {
  BoundKind kind = BoundKind::ConstSteadyState;
  double value = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double amplitude = 0.0;
};

/// Residual error under a constant disturbance: mu * dbar / gamma.
/// Requires 0 <= dbar < gamma, so the equilibrium lies inside the band.
double predict_const_bound(const SystemParams& p, double dbar);

/// Resonant-excitation bounds (max|x1|, max|x2|) = (dt mu / sqrt(gamma dt), sqrt(dt mu)).
std::pair<double, double> predict_resonant_bounds(const SystemParams& p, double dtilde);

/// Equilibrium x1 of the additive regularization under constant dbar:
/// mu dbar / (gamma - dbar).
double equilibrium_addreg(const SystemParams& p, double dbar);

/// Undamped forced response from rest to a constant dbar:
/// x1 = (mu/gamma) dbar (1 - cos w0 t), x2 = (w0 mu/gamma) dbar sin w0 t.
State forced_oscillation_closed_form(const SystemParams& p, double dbar, double t);

/// Zero-state response of x'' + sigma x' + w0^2 x = dtilde cos(w0 t),
/// valid for 0 < sigma < 2 w0.
double damped_forced_solution(double omega0, double sigma, double dtilde, double t);

struct SteadyState {
  double mean_abs_x1 = 0.0;
  double max_abs_x1 = 0.0;
  double max_abs_x2 = 0.0;
  std::size_t samples = 0;
};

/// Statistics over samples with t >= t_end - window (t_end = last sample).
SteadyState steady_state_metric(const Trajectory& traj, double window);

struct ChatterReport {
  std::size_t sign_switches = 0;  // strict sign changes, zero samples skipped
  double total_variation = 0.0;   // sum |u[k+1] - u[k]|
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;
};

ChatterReport chattering_metrics(const Trajectory& traj, double window);
/// Same metrics over a raw control series.
ChatterReport chattering_metrics(const std::vector<double>& u);

/// Streaming versions, fed from a simulate() observer so that metrics see
/// every raw sample even when the stored trajectory is decimated.
class SteadyStateAccumulator {
 public:
  explicit SteadyStateAccumulator(double t_from) : t_from_(t_from) {}
  void add(const Sample& s);
  SteadyState result() const;

 private:
  double t_from_;
  double sum_ = 0.0;
  SteadyState acc_;
};

class ChatterAccumulator {
 public:
  explicit ChatterAccumulator(double t_from) : t_from_(t_from) {}
  void add(const Sample& s);
  void add_control(double t, double u);
  ChatterReport result() const { return report_; }

 private:
  double t_from_;
  bool have_prev_ = false;
  double prev_ = 0.0;
  double last_nonzero_ = 0.0;
  ChatterReport report_;
};

/// One row of a predicted-vs-measured table.
struct MetricRow {
  std::string scenario;
  std::string quantity;
  double predicted = 0.0;
  double measured = 0.0;
  double rel_err() const;
};

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows);
void write_metrics_text(std::ostream& out, const std::vector<MetricRow>& rows);

}  // namespace regsmc
