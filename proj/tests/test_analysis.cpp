#include <cmath>
#include <numbers>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "regsmc/analysis.hpp"
#include "regsmc/sim.hpp"

using namespace regsmc;
using Catch::Approx;

namespace {

// Classical RK4 for x'' = f(t, x, x'). Cross-check oracle for the linear
// closed forms only.
template <class F>
State rk4(F f, State x, double t0, double t1, int n) {
  const double h = (t1 - t0) / n;
  double t = t0;
  for (int i = 0; i < n; ++i) {
    auto d = [&](double tt, State s) { return State{s.x2, f(tt, s)}; };
    const State k1 = d(t, x);
    const State k2 = d(t + h / 2, {x.x1 + h / 2 * k1.x1, x.x2 + h / 2 * k1.x2});
    const State k3 = d(t + h / 2, {x.x1 + h / 2 * k2.x1, x.x2 + h / 2 * k2.x2});
    const State k4 = d(t + h, {x.x1 + h * k3.x1, x.x2 + h * k3.x2});
    x.x1 += h / 6 * (k1.x1 + 2 * k2.x1 + 2 * k3.x1 + k4.x1);
    x.x2 += h / 6 * (k1.x2 + 2 * k2.x2 + 2 * k3.x2 + k4.x2);
    t += h;
  }
  return x;
}

Trajectory series(std::initializer_list<double> x1, std::initializer_list<double> u) {
  Trajectory tr;
  tr.dt = 1.0;
  auto a = x1.begin();
  auto b = u.begin();
  for (std::size_t i = 0; i < x1.size(); ++i, ++a, ++b) tr.push({double(i), {*a, 0.0}, *b, 0.0});
  return tr;
}

}  // namespace

TEST_CASE("constant-disturbance bound", "[analysis]") {
  REQUIRE(predict_const_bound({100.0, 0.01, 0.0}, 1.0) == Approx(1e-4).epsilon(1e-14));
  REQUIRE(predict_const_bound({100.0, 0.05, 0.0}, 10.0) == Approx(5e-3).epsilon(1e-14));
  REQUIRE(predict_const_bound({100.0, 0.05, 0.0}, 0.0) == 0.0);
  REQUIRE_THROWS(predict_const_bound({100.0, 0.05, 0.0}, 100.0));
}

TEST_CASE("resonant bounds", "[analysis]") {
  const auto [a, b] = predict_resonant_bounds({100.0, 0.01, 0.0}, 1.0);
  REQUIRE(a == Approx(1e-3));
  REQUIRE(b == Approx(0.1));
  const auto [c, d] = predict_resonant_bounds({100.0, 0.05, 0.0}, 10.0);
  REQUIRE(c == Approx(0.015811).epsilon(1e-4));
  REQUIRE(d == Approx(0.70711).epsilon(1e-4));
  const auto [e, f] = predict_resonant_bounds({100.0, 0.05, 0.0}, 1e-300);
  REQUIRE(e < 1e-150);
  REQUIRE(f < 1e-150);
  REQUIRE(predict_resonant_bounds({100.0, 0.05, 0.0}, 0.0) == std::pair{0.0, 0.0});
}

TEST_CASE("additive regularization equilibrium", "[analysis]") {
  REQUIRE(equilibrium_addreg({100.0, 1e-4, 0.0}, 0.0) == 0.0);
  REQUIRE(equilibrium_addreg({100.0, 1e-4, 0.0}, 1.0) == Approx(1.0101e-6).epsilon(1e-4));
  REQUIRE(equilibrium_addreg({100.0, 1e-300, 0.0}, 1.0) < 1e-290);
  // It is an equilibrium of the closed loop: gamma x1 / (x1 + mu) = dbar.
  const double x = equilibrium_addreg({100.0, 1e-4, 0.0}, 1.0);
  REQUIRE(100.0 * x / (x + 1e-4) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("predictor consistency", "[analysis][invariant]") {
  for (double dbar : {1e-3, 0.1, 1.0, 50.0}) {
    const SystemParams p{100.0, 0.01, 0.0};
    const double x = predict_const_bound(p, dbar);
    // Exact equilibrium of the inner MaxReg dynamics.
    REQUIRE(p.gamma * x / p.mu == Approx(dbar).epsilon(1e-14));
    REQUIRE(x < p.mu);
    const double ratio = equilibrium_addreg(p, dbar) / x;
    const double r = dbar / p.gamma;
    REQUIRE(std::fabs((ratio - 1.0) - r) <= 2.0 * r * r + 1e-12);
  }
}

TEST_CASE("undamped forced closed form", "[analysis]") {
  const SystemParams p{100.0, 0.01, 0.0};
  const double w0 = 100.0;
  REQUIRE(forced_oscillation_closed_form(p, 1.0, 0.0) == State{0.0, 0.0});
  const State half = forced_oscillation_closed_form(p, 1.0, std::numbers::pi / w0);
  REQUIRE(half.x1 == Approx(2e-4));
  REQUIRE(std::fabs(half.x2) < 1e-15);
  const State quarter = forced_oscillation_closed_form(p, 1.0, std::numbers::pi / (2 * w0));
  REQUIRE(quarter.x1 == Approx(1e-4));
  REQUIRE(quarter.x2 == Approx(1e-2));
}

TEST_CASE("closed form satisfies the linear ODE", "[analysis][invariant]") {
  const SystemParams p{100.0, 0.01, 0.0};
  const double w0 = 100.0;
  const double dbar = 1.0;
  const double h = 2e-7;
  for (double t : {0.001, 0.0137, 0.05, 0.31, 1.7}) {
    const State a = forced_oscillation_closed_form(p, dbar, t);
    const State up = forced_oscillation_closed_form(p, dbar, t + h);
    const State dn = forced_oscillation_closed_form(p, dbar, t - h);
    REQUIRE(std::fabs((up.x1 - dn.x1) / (2 * h) - a.x2) < 1e-9);
    REQUIRE(std::fabs((up.x2 - dn.x2) / (2 * h) + w0 * w0 * a.x1 - dbar) < 1e-9);
  }
  const State r = rk4([&](double, State s) { return dbar - w0 * w0 * s.x1; }, {0.0, 0.0}, 0.0, 0.3, 30000);
  const State c = forced_oscillation_closed_form(p, dbar, 0.3);
  REQUIRE(std::fabs(r.x1 - c.x1) < 1e-12);
  REQUIRE(std::fabs(r.x2 - c.x2) < 1e-10);
}

TEST_CASE("damped forced solution", "[analysis]") {
  REQUIRE(damped_forced_solution(100.0, 5.0, 1.0, 0.0) == 0.0);
  for (double t : {0.0, 0.3, 7.0}) REQUIRE(damped_forced_solution(100.0, 5.0, 0.0, t) == 0.0);
  // Late-time amplitude dtilde / (sigma w0).
  double peak = 0.0;
  for (int i = 0; i < 20000; ++i) peak = std::max(peak, std::fabs(damped_forced_solution(100.0, 5.0, 2.0, 10.0 + i * 1e-5)));
  REQUIRE(peak == Approx(2.0 / (5.0 * 100.0)).epsilon(1e-6));
  REQUIRE_THROWS(damped_forced_solution(100.0, 0.0, 1.0, 1.0));
  REQUIRE_THROWS(damped_forced_solution(100.0, 200.0, 1.0, 1.0));
}

TEST_CASE("damped solution matches RK4 and has zero initial velocity", "[analysis]") {
  const double w0 = 10.0, sigma = 0.7, dt = 2.0;
  const State r = rk4([&](double t, State s) { return dt * std::cos(w0 * t) - sigma * s.x2 - w0 * w0 * s.x1; },
                      {0.0, 0.0}, 0.0, 2.5, 50000);
  REQUIRE(damped_forced_solution(w0, sigma, dt, 2.5) == Approx(r.x1).epsilon(1e-9));
  const double h = 1e-6;
  REQUIRE(std::fabs(damped_forced_solution(w0, sigma, dt, h) / h) < 1e-5);
}

TEST_CASE("vanishing damping approaches the resonant ramp", "[analysis][invariant]") {
  const double w0 = 10.0, dtilde = 1.0;
  for (double t : {0.5, 1.0, 3.0}) {
    const double ramp = dtilde * t * std::sin(w0 * t) / (2.0 * w0);
    REQUIRE(std::fabs(damped_forced_solution(w0, 1e-7, dtilde, t) - ramp) < 1e-6);
  }
}

TEST_CASE("steady state metric", "[analysis]") {
  Trajectory c;
  c.dt = 0.1;
  for (int i = 0; i <= 100; ++i) c.push({i * 0.1, {-0.25, 0.0}, 0.0, 0.0});
  const auto ss = steady_state_metric(c, 2.0);
  REQUIRE(ss.mean_abs_x1 == Approx(0.25));
  REQUIRE(ss.max_abs_x1 == 0.25);
  REQUIRE(ss.max_abs_x2 == 0.0);
  REQUIRE(ss.samples == 21);
  REQUIRE_THROWS(steady_state_metric(Trajectory{}, 1.0));
}

TEST_CASE("steady state of the resonant scenario", "[analysis]") {
  Scenario sc;
  sc.kind = SystemKind::MaxReg;
  sc.params = {100.0, 0.01, 1.0};
  sc.disturbance = DisturbanceSpec::resonant(1.0, 5.0);
  sc.x0 = {1.0, 0.0};
  SimOptions opt;
  opt.decimation = 10;
  const auto ss = steady_state_metric(simulate(sc, opt), 2.0);
  // The Euler run sits about 9% above the linearization bound.
  REQUIRE(ss.max_abs_x1 == Approx(1e-3).epsilon(0.10));
  REQUIRE(ss.max_abs_x1 > 1e-3);
}

TEST_CASE("chattering metrics", "[analysis]") {
  const auto zero = chattering_metrics(std::vector<double>(50, 0.0));
  REQUIRE(zero.sign_switches == 0);
  REQUIRE(zero.total_variation == 0.0);
  std::vector<double> alt;
  for (int i = 0; i < 40; ++i) alt.push_back(i % 2 ? -1.0 : 1.0);
  const auto a = chattering_metrics(alt);
  REQUIRE(a.sign_switches == 39);
  REQUIRE(a.total_variation == 78.0);
  // Zero samples are skipped, not counted as switches.
  const auto z = chattering_metrics(std::vector<double>{1.0, 0.0, 0.0, 1.0, 0.0, -1.0});
  REQUIRE(z.sign_switches == 1);
  const auto w = chattering_metrics(series({0, 0, 0, 0, 0}, {5.0, -1.0, 1.0, -1.0, 1.0}), 2.0);
  REQUIRE(w.samples == 3);
  REQUIRE(w.sign_switches == 2);
  REQUIRE(w.t_start == 2.0);
}

TEST_CASE("chatter coherence on simulated controls", "[analysis][invariant]") {
  Scenario sc;
  sc.kind = SystemKind::MaxReg;
  sc.params = {100.0, 1e-4, 0.0};
  sc.x0 = {1e-4, 1.0};
  sc.t_end = 0.5;
  const auto traj = simulate(sc);
  const auto rep = chattering_metrics(traj, 0.25);
  double min_jump = std::numeric_limits<double>::infinity();
  const double t_from = traj.t.back() - 0.25 - 0.5 * traj.dt;
  double prev_nz = 0.0;
  std::size_t start = 0;
  while (traj.t[start] < t_from) ++start;
  for (std::size_t i = start; i < traj.size(); ++i) {
    if (traj.u[i] == 0.0) continue;
    if (prev_nz != 0.0 && (traj.u[i] > 0) != (prev_nz > 0)) min_jump = std::min(min_jump, std::fabs(traj.u[i] - prev_nz));
    prev_nz = traj.u[i];
  }
  REQUIRE(rep.sign_switches > 0);
  REQUIRE(rep.total_variation >= rep.sign_switches * min_jump);
}

TEST_CASE("metric tables", "[analysis]") {
  std::vector<MetricRow> rows{{"maxreg", "mean_abs_x1", 1e-4, 1.01e-4}};
  REQUIRE(rows[0].rel_err() == Approx(0.01));
  std::ostringstream csv, txt;
  write_metrics_csv(csv, rows);
  REQUIRE(csv.str() == "scenario,quantity,predicted,measured,rel_err\nmaxreg,mean_abs_x1,0.0001,0.000101,0.01\n");
  write_metrics_text(txt, rows);
  REQUIRE(txt.str().find("1.00%") != std::string::npos);
}
