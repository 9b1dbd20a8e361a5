#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regsmc/commands.hpp"

using namespace regsmc;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  bool plot = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "Flat key=value scenario file")->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", c.sets, "Override a config key (key=value), repeatable");
  cmd->add_option("-o,--out", c.out, "Output CSV path");
  cmd->add_flag("--plot", c.plot, "Also write a gnuplot script next to the CSV");
}

RunConfig build_config(const Common& c) {
  std::vector<Override> ov;
  for (const auto& s : c.sets) ov.push_back(parse_override(s));
  if (!c.out.empty()) ov.emplace_back("out", c.out);
  if (c.plot) ov.emplace_back("plot", "true");
  RunConfig cfg = c.config.empty() ? parse_config("", ov) : load_config(c.config, ov);
  apply_env_overrides(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized quasi-continuous sliding-mode control lab"};
  app.require_subcommand(1);

  Common sim_opts;
  auto* sim = app.add_subcommand("simulate", "Run one scenario and report steady-state metrics");
  add_common(sim, sim_opts);

  Common cmp_opts;
  auto* cmp = app.add_subcommand("compare", "Run original, maxreg and addreg from the same data");
  add_common(cmp, cmp_opts);

  Common sweep_opts;
  std::string param;
  std::vector<double> values;
  std::vector<double> amplitudes;
  auto* sweep = app.add_subcommand("sweep", "Vary one parameter and tabulate predicted vs measured");
  add_common(sweep, sweep_opts);
  sweep->add_option("--param", param, "mu | gamma | amplitude")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("--amplitudes", amplitudes, "Disturbance amplitude paired with each value")
      ->delimiter(',');

  std::vector<int> criteria;
  double tamper = 0.0;
  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  verify->add_option("-c,--criterion", criteria, "Run only these criteria (1-9)")
      ->check(CLI::Range(1, kCriterionCount));
  verify->add_option("--tamper-gain", tamper, "Offset added to the regularized-system gain threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(build_config(sim_opts), std::cout, std::cerr);
    if (*cmp) return cmd_compare(build_config(cmp_opts), std::cout, std::cerr);
    if (*sweep) {
      SweepSpec spec{param, values, amplitudes, build_config(sweep_opts)};
      const std::string out = sweep_opts.out.empty() ? "sweep.csv" : sweep_opts.out;
      return cmd_sweep(spec, out, std::cout, std::cerr);
    }
    if (*verify) {
      AcceptanceOptions opt = acceptance_options_from_env();
      opt.regularized_threshold_offset = tamper;
      return cmd_verify(opt, criteria, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitFailure;
}
