#include "regsmc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace regsmc {

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::ConstSteadyState: return "const_steady_state";
    case BoundKind::ResonantMaxX1: return "resonant_max_x1";
    case BoundKind::ResonantMaxX2: return "resonant_max_x2";
    case BoundKind::AddRegEquilibrium: return "addreg_equilibrium";
  }
  return "unknown";
}

double predict_const_bound(const SystemParams& p, double dbar) {
  validate(p, SystemKind::MaxReg);
  if (!(dbar >= 0.0)) throw std::invalid_argument("dbar must be >= 0");
  if (!(dbar < p.gamma)) {
    throw std::invalid_argument("dbar >= gamma: equilibrium leaves the mu-band");
  }
  return p.mu * dbar / p.gamma;
}

std::pair<double, double> predict_resonant_bounds(const SystemParams& p, double dtilde) {
  validate(p, SystemKind::MaxReg);
  if (!(dtilde >= 0.0)) throw std::invalid_argument("dtilde must be >= 0");
  if (dtilde == 0.0) return {0.0, 0.0};
  return {dtilde * p.mu / std::sqrt(p.gamma * dtilde), std::sqrt(dtilde * p.mu)};
}

double equilibrium_addreg(const SystemParams& p, double dbar) {
  validate(p, SystemKind::AddReg);
  if (!(dbar >= 0.0)) throw std::invalid_argument("dbar must be >= 0");
  if (!(dbar < p.gamma)) throw std::invalid_argument("dbar >= gamma: no equilibrium");
  return p.mu * dbar / (p.gamma - dbar);
}

State forced_oscillation_closed_form(const SystemParams& p, double dbar, double t) {
  validate(p, SystemKind::MaxReg);
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  const double w0 = std::sqrt(p.gamma / p.mu);
  const double a = p.mu / p.gamma * dbar;
  return {a * (1.0 - std::cos(w0 * t)), w0 * a * std::sin(w0 * t)};
}

double damped_forced_solution(double omega0, double sigma, double dtilde, double t) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  if (!(sigma > 0.0 && sigma < 2.0 * omega0)) {
    throw std::invalid_argument("sigma must lie in (0, 2 omega0)");
  }
  const double wd = std::sqrt(omega0 * omega0 - 0.25 * sigma * sigma);
  // Zero initial position and velocity fix the transient amplitude at omega0 / wd.
  return dtilde / (sigma * omega0) *
         (std::sin(omega0 * t) - std::exp(-0.5 * sigma * t) * (omega0 / wd) * std::sin(wd * t));
}

void SteadyStateAccumulator::add(const Sample& s) {
  if (s.t < t_from_) return;
  const double a = std::fabs(s.x.x1);
  sum_ += a;
  acc_.max_abs_x1 = std::max(acc_.max_abs_x1, a);
  acc_.max_abs_x2 = std::max(acc_.max_abs_x2, std::fabs(s.x.x2));
  ++acc_.samples;
}

SteadyState SteadyStateAccumulator::result() const {
  if (acc_.samples == 0) throw std::invalid_argument("steady-state window is empty");
  SteadyState r = acc_;
  r.mean_abs_x1 = sum_ / static_cast<double>(acc_.samples);
  return r;
}

namespace {

// Window start, with a half-sample guard so that k*dt rounding does not
// drop the first sample of the window.
double window_start(const Trajectory& traj, double window) {
  if (traj.empty()) throw std::invalid_argument("trajectory is empty");
  if (!(window > 0.0)) throw std::invalid_argument("window must be > 0");
  return traj.t.back() - window - 0.5 * traj.dt;
}

}  // namespace

SteadyState steady_state_metric(const Trajectory& traj, double window) {
  SteadyStateAccumulator acc(window_start(traj, window));
  for (std::size_t i = 0; i < traj.size(); ++i) acc.add(traj.sample(i));
  return acc.result();
}

void ChatterAccumulator::add(const Sample& s) { add_control(s.t, s.u); }

void ChatterAccumulator::add_control(double t, double u) {
  if (t < t_from_) return;
  if (report_.samples == 0) report_.t_start = t;
  report_.t_end = t;
  ++report_.samples;
  if (have_prev_) report_.total_variation += std::fabs(u - prev_);
  have_prev_ = true;
  prev_ = u;
  if (u != 0.0) {
    if (last_nonzero_ != 0.0 && (u > 0.0) != (last_nonzero_ > 0.0)) ++report_.sign_switches;
    last_nonzero_ = u;
  }
}

ChatterReport chattering_metrics(const Trajectory& traj, double window) {
  ChatterAccumulator acc(window_start(traj, window));
  for (std::size_t i = 0; i < traj.size(); ++i) acc.add_control(traj.t[i], traj.u[i]);
  const auto r = acc.result();
  if (r.samples == 0) throw std::invalid_argument("chatter window is empty");
  return r;
}

ChatterReport chattering_metrics(const std::vector<double>& u) {
  ChatterAccumulator acc(0.0);
  for (std::size_t i = 0; i < u.size(); ++i) acc.add_control(static_cast<double>(i), u[i]);
  return acc.result();
}

double MetricRow::rel_err() const {
  if (predicted == 0.0) return measured == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::fabs(measured - predicted) / std::fabs(predicted);
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "scenario,quantity,predicted,measured,rel_err\n";
  out << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.quantity << ',' << r.predicted << ',' << r.measured << ','
        << r.rel_err() << '\n';
  }
}

void write_metrics_text(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << std::left << std::setw(22) << "scenario" << std::setw(20) << "quantity" << std::right
      << std::setw(14) << "predicted" << std::setw(14) << "measured" << std::setw(11) << "rel_err"
      << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(22) << r.scenario << std::setw(20) << r.quantity << std::right
        << std::setprecision(6) << std::setw(14) << r.predicted << std::setw(14) << r.measured
        << std::setw(10) << std::fixed << std::setprecision(2) << 100.0 * r.rel_err() << '%'
        << std::defaultfloat << '\n';
  }
}

}  // namespace regsmc
