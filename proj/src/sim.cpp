#include "regsmc/sim.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "regsmc/dynamics.hpp"
#include "regsmc/kernels.hpp"

namespace regsmc {

void Trajectory::push(const Sample& s) {
  t.push_back(s.t);
  x1.push_back(s.x.x1);
  x2.push_back(s.x.x2);
  u.push_back(s.u);
  d.push_back(s.d);
}

void validate(const Scenario& sc) {
  validate(sc.params, sc.kind);
  if (!is_finite(sc.x0)) throw std::invalid_argument("x0 must be finite");
  if (!(std::isfinite(sc.dt) && sc.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(std::isfinite(sc.t_end) && sc.t_end > sc.dt)) {
    throw std::invalid_argument("t_end must be finite and > dt");
  }
  const double ratio = sc.t_end / sc.dt;
  if (ratio > 1e12) throw std::invalid_argument("t_end / dt too large");
  const double n = std::round(ratio);
  if (std::fabs(n * sc.dt - sc.t_end) > 1e-9 * std::max(1.0, sc.t_end)) {
    throw std::invalid_argument("t_end must be an integer multiple of dt");
  }
  if (sc.disturbance.kind == DisturbanceKind::ResonantHarmonic && !sc.disturbance.frequency &&
      !(sc.params.mu > 0.0)) {
    throw std::invalid_argument("harmonic disturbance needs a frequency or mu > 0");
  }
  validate(sc.disturbance, sc.params.dist_bound);
}

std::size_t step_count(const Scenario& sc) {
  return static_cast<std::size_t>(std::llround(sc.t_end / sc.dt));
}

State step_euler(SystemKind kind, State s, double t, double dt, const DisturbanceSpec& spec,
                 const SystemParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const Derivative f = vector_field(kind, s, p, sample_disturbance(spec, t));
  const State next{s.x1 + dt * f.x1, s.x2 + dt * f.x2};
  if (!is_finite(next)) throw DivergenceError("Euler step produced a non-finite state");
  return next;
}

std::vector<LaneStatus> integrate_lockstep(SystemKind kind, const SystemParams& p,
                                           const DisturbanceSpec& spec, double dt,
                                           std::size_t n_steps, std::span<const State> x0,
                                           double guard,
                                           const std::function<void(const LockstepView&)>& on_sample) {
  const std::size_t lanes = x0.size();
  std::vector<LaneStatus> status(lanes);
  if (lanes == 0) return status;

  std::vector<double> x1(lanes), x2(lanes), u(lanes), snap1(lanes), snap2(lanes);
  std::vector<std::uint8_t> alive(lanes, 1);
  for (std::size_t i = 0; i < lanes; ++i) {
    x1[i] = x0[i].x1;
    x2[i] = x0[i].x2;
  }
  std::size_t live = lanes;
  const auto& k = kernels::active_table();

  for (std::size_t step = 0; step <= n_steps && live > 0; ++step) {
    const double t = static_cast<double>(step) * dt;
    const double d = sample_disturbance(spec, t);
    snap1 = x1;
    snap2 = x2;
    if (step < n_steps) {
      k.euler_step(kind, x1, x2, d, p.gamma, p.mu, dt, u);
    } else {
      k.control(kind, x1, x2, p.gamma, p.mu, u);
    }
    if (on_sample) on_sample(LockstepView{step, t, d, snap1, snap2, u, alive});
    for (std::size_t i = 0; i < lanes; ++i) {
      if (!alive[i]) continue;
      ++status[i].samples;
      if (step == n_steps) continue;
      const double a = x1[i];
      const double b = x2[i];
      if (!(std::fabs(a) <= guard && std::fabs(b) <= guard)) {
        alive[i] = 0;
        status[i].diverged = true;
        status[i].divergence_time = static_cast<double>(step + 1) * dt;
        x1[i] = 0.0;
        x2[i] = 0.0;
        --live;
      }
    }
  }
  return status;
}

namespace {

DisturbanceSpec resolved_spec(const Scenario& sc) {
  if (sc.disturbance.kind == DisturbanceKind::ResonantHarmonic && !sc.disturbance.frequency) {
    return resolve(sc.disturbance, sc.params);
  }
  return sc.disturbance;
}

void note_table_clamp(const Scenario& sc, const DisturbanceSpec& spec, Trajectory& traj) {
  if (spec.kind != DisturbanceKind::Tabulated) return;
  if (!table_covers(spec, sc.t_end) || !table_covers(spec, sc.disturbance.onset_time)) {
    std::ostringstream msg;
    msg << "disturbance table covers [" << spec.table.front().first + spec.onset_time << ", "
        << spec.table.back().first + spec.onset_time << "] s; values outside are clamped";
    traj.warnings.push_back(msg.str());
  }
}

bool same_group(const Scenario& a, const Scenario& b) {
  return a.kind == b.kind && a.params == b.params && a.disturbance == b.disturbance &&
         a.dt == b.dt && a.t_end == b.t_end;
}

std::vector<Trajectory> run_group(std::span<const Scenario> group, const SimOptions& opt,
                                  const std::vector<SampleObserver>* observers) {
  const Scenario& head = group.front();
  const DisturbanceSpec spec = resolved_spec(head);
  const std::size_t n = step_count(head);
  const std::size_t dec = std::max<std::size_t>(1, opt.decimation);

  std::vector<State> x0;
  x0.reserve(group.size());
  for (const auto& sc : group) x0.push_back(sc.x0);

  std::vector<Trajectory> out(group.size());
  for (auto& tr : out) {
    tr.dt = head.dt * static_cast<double>(dec);
    const std::size_t kept = n / dec + 1;
    tr.t.reserve(kept);
    tr.x1.reserve(kept);
    tr.x2.reserve(kept);
    tr.u.reserve(kept);
    tr.d.reserve(kept);
    note_table_clamp(head, spec, tr);
  }

  auto status = integrate_lockstep(
      head.kind, head.params, spec, head.dt, n, x0, opt.divergence_guard,
      [&](const LockstepView& v) {
        const bool keep = v.step % dec == 0;
        for (std::size_t i = 0; i < out.size(); ++i) {
          if (!v.alive[i]) continue;
          const Sample s{v.t, {v.x1[i], v.x2[i]}, v.u[i], v.d};
          if (observers && (*observers)[i]) (*observers)[i](s);
          if (keep) out[i].push(s);
        }
      });

  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].diverged = status[i].diverged;
    out[i].divergence_time = status[i].divergence_time;
  }
  return out;
}

}  // namespace

Trajectory simulate(const Scenario& sc, const SimOptions& opt, const SampleObserver& observer) {
  validate(sc);
  const std::vector<SampleObserver> obs{observer};
  return std::move(run_group(std::span(&sc, 1), opt, &obs).front());
}

std::vector<Trajectory> batch_run(std::span<const Scenario> scenarios, const SimOptions& opt) {
  for (const auto& sc : scenarios) validate(sc);
  std::vector<Trajectory> out(scenarios.size());
  std::vector<bool> done(scenarios.size(), false);
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> members{i};
    for (std::size_t j = i + 1; j < scenarios.size(); ++j) {
      if (!done[j] && same_group(scenarios[i], scenarios[j])) members.push_back(j);
    }
    std::vector<Scenario> group;
    group.reserve(members.size());
    for (auto m : members) group.push_back(scenarios[m]);
    auto results = run_group(group, opt, nullptr);
    for (std::size_t g = 0; g < members.size(); ++g) {
      out[members[g]] = std::move(results[g]);
      done[members[g]] = true;
    }
  }
  return out;
}

std::vector<RegionEvent> detect_region_crossings(const Trajectory& traj, double mu) {
  std::vector<RegionEvent> events;
  if (traj.empty()) return events;
  bool inside = std::fabs(traj.x1.front()) < mu;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const bool now = std::fabs(traj.x1[i]) < mu;
    if (now != inside) {
      events.push_back({traj.t[i], now ? CrossingDirection::Entering : CrossingDirection::Leaving});
      inside = now;
    }
  }
  return events;
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, ptr - buf);
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x1,x2,u,d\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    put(out, traj.t[i]);
    out << ',';
    put(out, traj.x1[i]);
    out << ',';
    put(out, traj.x2[i]);
    out << ',';
    put(out, traj.u[i]);
    out << ',';
    put(out, traj.d[i]);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory traj;
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x1,x2,u,d", 0) != 0) {
    throw std::invalid_argument("trajectory CSV must start with header t,x1,x2,u,d");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[5];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int c = 0; c < 5; ++c) {
      auto [ptr, ec] = std::from_chars(p, end, v[c]);
      if (ec != std::errc() || (c < 4 && (ptr == end || *ptr != ','))) {
        throw std::invalid_argument("malformed trajectory CSV at line " + std::to_string(lineno));
      }
      p = ptr + 1;
    }
    traj.push({v[0], {v[1], v[2]}, v[3], v[4]});
  }
  if (traj.size() >= 2) traj.dt = traj.t[1] - traj.t[0];
  return traj;
}

}  // namespace regsmc
