#include "regsmc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "regsmc/signals.hpp"
#include "regsmc/sim.hpp"

namespace regsmc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCompareWindow = 1.0;

bool is_resonant(const Scenario& sc) {
  const auto& ds = sc.disturbance;
  if (ds.kind != DisturbanceKind::ResonantHarmonic) return false;
  if (!ds.frequency) return true;
  const double w0 = resonant_frequency(sc.params);
  return std::fabs(*ds.frequency - w0) <= 1e-12 * w0;
}

struct RunResult {
  Trajectory traj;
  SteadyState ss;
  ChatterReport chatter;
};

RunResult run(const Scenario& sc, std::size_t decimation, double window) {
  const double t_from = sc.t_end - window - 0.5 * sc.dt;
  SteadyStateAccumulator ss(t_from);
  ChatterAccumulator ch(t_from);
  SimOptions opt;
  opt.decimation = decimation;
  RunResult r;
  r.traj = simulate(sc, opt, [&](const Sample& s) {
    ss.add(s);
    ch.add(s);
  });
  if (!r.traj.diverged) r.ss = ss.result();
  r.chatter = ch.result();
  return r;
}

bool write_csv_file(const std::string& path, const Trajectory& traj, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (f) write_trajectory_csv(f, traj);
  f.close();
  if (!f) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  return true;
}

bool write_plot_script(const std::string& stem, const std::vector<std::string>& csvs,
                       std::ostream& err) {
  const std::string path = stem + ".gp";
  std::ofstream f(path, std::ios::binary);
  f << "# gnuplot " << std::filesystem::path(path).filename().string() << "\n"
    << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set multiplot layout 3,1\n";
  auto plot = [&](const char* cols, const char* ylabel) {
    f << "set ylabel '" << ylabel << "'\nplot ";
    for (std::size_t i = 0; i < csvs.size(); ++i) {
      if (i) f << ", ";
      f << "'" << csvs[i] << "' using " << cols << " with lines title '"
        << std::filesystem::path(csvs[i]).stem().string() << "'";
    }
    f << '\n';
  };
  plot("1:2", "x1");
  plot("1:3", "x2");
  plot("1:4", "u");
  f << "unset multiplot\n";
  f.close();
  if (!f) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  return true;
}

void print_warnings(const std::vector<std::string>& w, std::ostream& err) {
  for (const auto& s : w) err << "warning: " << s << '\n';
}

}  // namespace

std::string output_stem(const std::string& path) {
  constexpr std::string_view ext = ".csv";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size());
  }
  return path;
}

std::vector<MetricRow> scenario_metrics(const Scenario& sc, const SteadyState& ss,
                                        const std::string& label) {
  std::vector<MetricRow> rows;
  const auto& ds = sc.disturbance;
  const double amp = std::fabs(ds.amplitude);
  const double gamma = sc.params.gamma;
  if (ds.kind == DisturbanceKind::Constant && amp < gamma) {
    if (sc.kind == SystemKind::MaxReg) {
      rows.push_back({label, "mean_abs_x1", predict_const_bound(sc.params, amp), ss.mean_abs_x1});
    } else if (sc.kind == SystemKind::AddReg) {
      rows.push_back({label, "mean_abs_x1", equilibrium_addreg(sc.params, amp), ss.mean_abs_x1});
    }
  } else if (sc.kind == SystemKind::MaxReg && is_resonant(sc)) {
    const auto [p1, p2] = predict_resonant_bounds(sc.params, amp);
    rows.push_back({label, "max_abs_x1", p1, ss.max_abs_x1});
    rows.push_back({label, "max_abs_x2", p2, ss.max_abs_x2});
  }
  if (rows.empty()) {
    rows.push_back({label, "mean_abs_x1", kNaN, ss.mean_abs_x1});
    rows.push_back({label, "max_abs_x1", kNaN, ss.max_abs_x1});
    rows.push_back({label, "max_abs_x2", kNaN, ss.max_abs_x2});
  }
  return rows;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  print_warnings(cfg.warnings, err);
  const Scenario& sc = cfg.scenario;
  const RunResult r = run(sc, cfg.decimation, cfg.window);
  print_warnings(r.traj.warnings, err);
  if (!write_csv_file(cfg.out, r.traj, err)) return kExitIo;
  const std::string stem = output_stem(cfg.out);
  if (cfg.plot && !write_plot_script(stem, {cfg.out}, err)) return kExitIo;
  if (r.traj.diverged) {
    err << "error: trajectory diverged at t=" << r.traj.divergence_time << '\n';
    return kExitDivergence;
  }
  const auto rows = scenario_metrics(sc, r.ss, std::string(to_string(sc.kind)));
  {
    std::ofstream f(stem + ".metrics.csv", std::ios::binary);
    if (f) write_metrics_csv(f, rows);
    f.close();
    if (!f) {
      err << "error: cannot write " << stem << ".metrics.csv\n";
      return kExitIo;
    }
  }
  out << "wrote " << cfg.out << " (" << r.traj.size() << " samples)\n";
  out << "steady state over final " << cfg.window << " s: samples=" << r.ss.samples << '\n';
  write_metrics_text(out, rows);
  return kExitOk;
}

int cmd_compare(const RunConfig& base, std::ostream& out, std::ostream& err) {
  RunConfig cfg = base;
  if (!cfg.window_explicit) cfg.window = std::min(kCompareWindow, cfg.scenario.t_end);
  print_warnings(cfg.warnings, err);
  const std::string stem = output_stem(cfg.out);
  const SystemKind kinds[3] = {SystemKind::Original, SystemKind::MaxReg, SystemKind::AddReg};
  RunResult results[3];
  std::vector<std::string> paths;
  int status = kExitOk;
  for (int i = 0; i < 3; ++i) {
    Scenario sc = cfg.scenario;
    sc.kind = kinds[i];
    results[i] = run(sc, cfg.decimation, cfg.window);
    print_warnings(results[i].traj.warnings, err);
    const std::string path = stem + "_" + std::string(to_string(kinds[i])) + ".csv";
    if (!write_csv_file(path, results[i].traj, err)) return kExitIo;
    paths.push_back(path);
    if (results[i].traj.diverged) {
      err << "error: " << to_string(kinds[i]) << " diverged at t=" << results[i].traj.divergence_time
          << '\n';
      status = kExitDivergence;
    }
  }
  if (cfg.plot && !write_plot_script(stem, paths, err)) return kExitIo;

  out << "chattering over final " << cfg.window << " s\n";
  out << std::left << std::setw(10) << "system" << std::right << std::setw(12) << "switches"
      << std::setw(18) << "total_variation" << std::setw(14) << "diverged_at" << '\n';
  for (int i = 0; i < 3; ++i) {
    const auto& r = results[i];
    out << std::left << std::setw(10) << to_string(kinds[i]) << std::right << std::setw(12)
        << r.chatter.sign_switches << std::setw(18) << std::setprecision(6) << r.chatter.total_variation
        << std::setw(14);
    if (r.traj.diverged) {
      out << r.traj.divergence_time;
    } else {
      out << "-";
    }
    out << '\n';
  }
  const auto& orig = results[0].chatter;
  for (int i = 1; i < 3; ++i) {
    out << "original/" << to_string(kinds[i]) << ": ";
    if (results[0].traj.diverged || results[i].traj.diverged) {
      out << "ratios not defined (a run diverged)\n";
      continue;
    }
    const auto& c = results[i].chatter;
    out << "switch ratio="
        << static_cast<double>(orig.sign_switches) /
               std::max<double>(1.0, static_cast<double>(c.sign_switches))
        << " TV ratio=" << (orig.total_variation > 0.0 ? c.total_variation / orig.total_variation : kNaN)
        << '\n';
  }

  // Original and MaxReg share the vector field outside the band, so their
  // trajectories coincide until one of them first enters it.
  const Trajectory& a = results[0].traj;
  const Trajectory& b = results[1].traj;
  const double mu = cfg.scenario.params.mu;
  std::size_t k = 0;
  double dev = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  while (k < n && std::fabs(a.x1[k]) >= mu && std::fabs(b.x1[k]) >= mu) {
    dev = std::max({dev, std::fabs(a.x1[k] - b.x1[k]), std::fabs(a.x2[k] - b.x2[k])});
    ++k;
  }
  out << "original vs maxreg outside the band: " << k << " stored samples, max deviation=" << dev
      << '\n';
  return status;
}

void validate(const SweepSpec& spec) {
  if (spec.param != "mu" && spec.param != "gamma" && spec.param != "amplitude") {
    throw ConfigError("param", 0, "expected mu|gamma|amplitude, got '" + spec.param + "'");
  }
  if (spec.values.empty()) throw ConfigError("values", 0, "value list is empty");
  if (!spec.paired_amplitudes.empty() && spec.paired_amplitudes.size() != spec.values.size()) {
    throw ConfigError("amplitudes", 0, "paired amplitude list must match the value list length");
  }
  if (!spec.paired_amplitudes.empty() && spec.param == "amplitude") {
    throw ConfigError("amplitudes", 0, "cannot pair amplitudes with an amplitude sweep");
  }
}

int cmd_sweep(const SweepSpec& spec, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  validate(spec);
  print_warnings(spec.base.warnings, err);
  std::ostringstream csv;
  csv << "param,value,predicted,measured,rel_err\n" << std::setprecision(10);
  int status = kExitOk;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double v = spec.values[i];
    Scenario sc = spec.base.scenario;
    if (spec.param == "mu") sc.params.mu = v;
    if (spec.param == "gamma") sc.params.gamma = v;
    if (spec.param == "amplitude") sc.disturbance.amplitude = v;
    if (!spec.paired_amplitudes.empty()) sc.disturbance.amplitude = spec.paired_amplitudes[i];
    sc.params.dist_bound = sup_norm(sc.disturbance);
    MetricRow row{spec.param, "", kNaN, kNaN};
    try {
      validate(sc);
      const RunResult r = run(sc, step_count(sc) + 1, spec.base.window);
      if (r.traj.diverged) throw DivergenceError("diverged at t=" + std::to_string(r.traj.divergence_time));
      row = scenario_metrics(sc, r.ss, spec.param).front();
    } catch (const std::exception& e) {
      err << "sweep " << spec.param << "=" << v << ": " << e.what() << '\n';
      status = kExitFailure;
    }
    csv << spec.param << ',' << v << ',' << row.predicted << ',' << row.measured << ','
        << row.rel_err() << '\n';
    out << spec.param << '=' << v << "  " << row.quantity << " predicted=" << row.predicted
        << " measured=" << row.measured << " rel_err=" << row.rel_err() << '\n';
  }
  std::ofstream f(out_path, std::ios::binary);
  f << csv.str();
  f.close();
  if (!f) {
    err << "error: cannot write " << out_path << '\n';
    return kExitIo;
  }
  out << "wrote " << out_path << '\n';
  return status;
}

int cmd_verify(const AcceptanceOptions& opt, std::span<const int> ids, std::ostream& out) {
  const auto results = run_acceptance(opt, ids, out);
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
  out << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size()
      << " criteria passed\n";
  return failed ? kExitFailure : kExitOk;
}

}  // namespace regsmc
