#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "regsmc/signals.hpp"
#include "regsmc/types.hpp"

namespace regsmc {

/// Raised when an integration step leaves the finite/guarded range.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  SystemKind kind = SystemKind::MaxReg;
  SystemParams params;
  DisturbanceSpec disturbance;
  State x0;
  double dt = 1e-5;
  double t_end = 20.0;
};

/// Throws std::invalid_argument when any field or sub-spec is invalid,
/// including a horizon that is not an integer multiple of dt.
void validate(const Scenario& sc);

/// Number of Euler steps; the trajectory has step_count + 1 samples.
std::size_t step_count(const Scenario& sc);

struct SimOptions {
  std::size_t decimation = 1;       // keep every n-th sample in the Trajectory
  double divergence_guard = 1e9;    // |x1| or |x2| above this truncates the run
};

/// One raw sample: state at t, control u(x) without disturbance, and d(t).
struct Sample {
  double t = 0.0;
  State x;
  double u = 0.0;
  double d = 0.0;
};

/// Uniformly sampled run. Series are parallel arrays of equal length.
struct Trajectory {
  double dt = 0.0;  // spacing of stored samples (scenario dt * decimation)
  std::vector<double> t;
  std::vector<double> x1;
  std::vector<double> x2;
  std::vector<double> u;
  std::vector<double> d;
  bool diverged = false;
  double divergence_time = 0.0;  // first time whose state tripped the guard
  std::vector<std::string> warnings;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
  State state(std::size_t i) const { return {x1[i], x2[i]}; }
  Sample sample(std::size_t i) const { return {t[i], state(i), u[i], d[i]}; }
  void push(const Sample& s);
};

/// s + dt * vector_field(kind, s, p, d(t)). Throws DivergenceError when the
/// result is not finite.
State step_euler(SystemKind kind, State s, double t, double dt, const DisturbanceSpec& spec,
                 const SystemParams& p);

using SampleObserver = std::function<void(const Sample&)>;

/// Fixed-step explicit Euler run. The observer, when given, sees every raw
/// sample before decimation (and is the place to compute metrics).
Trajectory simulate(const Scenario& sc, const SimOptions& opt = {},
                    const SampleObserver& observer = {});

/// Scenarios are integrated in lockstep where they differ only in x0; the
/// result at index i is identical to simulate(scenarios[i], opt).
std::vector<Trajectory> batch_run(std::span<const Scenario> scenarios, const SimOptions& opt = {});

// Lockstep engine --------------------------------------------------------

/// Per-sample view over all lanes of a lockstep run. alive[i] == 0 marks a
/// lane that diverged earlier; its entries are meaningless.
struct LockstepView {
  std::size_t step = 0;
  double t = 0.0;
  double d = 0.0;
  std::span<const double> x1;
  std::span<const double> x2;
  std::span<const double> u;
  std::span<const std::uint8_t> alive;
};

struct LaneStatus {
  bool diverged = false;
  double divergence_time = 0.0;
  std::size_t samples = 0;  // raw samples emitted for this lane
};

/// Integrates one lane per initial state with shared dynamics and
/// disturbance, calling on_sample for k = 0..n_steps. `spec` must be resolved.
std::vector<LaneStatus> integrate_lockstep(SystemKind kind, const SystemParams& p,
                                           const DisturbanceSpec& spec, double dt,
                                           std::size_t n_steps, std::span<const State> x0,
                                           double divergence_guard,
                                           const std::function<void(const LockstepView&)>& on_sample);

// Band crossings -----------------------------------------------------------

enum class CrossingDirection { Entering, Leaving };

struct RegionEvent {
  double time = 0.0;
  CrossingDirection direction = CrossingDirection::Entering;
};

/// Sample-resolution crossings of |x1| = mu. The event time is the first
/// sample on the new side. Directions alternate by construction.
std::vector<RegionEvent> detect_region_crossings(const Trajectory& traj, double mu);

// CSV --------------------------------------------------------------------

/// Header `t,x1,x2,u,d`, shortest round-trip decimal formatting.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace regsmc
