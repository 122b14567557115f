#include "rkhs/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Adaptive state observer with kernel-based uncertainty estimates"};
  app.require_subcommand(1);

  rkhs::RunOptions run;
  rkhs::SweepOptions sweep;
  long long seed = 0;

  auto add_common = [&seed](CLI::App* cmd, rkhs::RunOptions& o) {
    cmd->add_option("--config", o.config_path, "Scenario file (TOML)")->required();
    cmd->add_option("--out", o.out_dir, "Output directory (overrides output.dir)");
    cmd->add_option("--override", o.overrides, "section.key=value, repeatable")->take_all();
    cmd->add_option("--seed", seed, "Reserved; all signals are deterministic");
  };

  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write CSV + summary");
  add_common(run_cmd, run);
  auto* report_cmd = app.add_subcommand("design-report", "Print design quantities without simulating");
  add_common(report_cmd, run);
  auto* sweep_cmd = app.add_subcommand("sweep", "Repeat a scenario across parameter values");
  add_common(sweep_cmd, sweep.run);
  sweep_cmd->add_option("--axis", sweep.axis, "Config key or alias (centers_per_axis, delta_scale, d, h)")
      ->required();
  sweep_cmd->add_option("--values", sweep.values, "Values, comma separated")->delimiter(',');
  sweep_cmd->add_option("--with", sweep.with, "Coupled axis key=v1,v2,... (repeatable)");
  sweep_cmd->add_flag("--design-only", sweep.design_only, "Skip integration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rkhs::kExitValidation;
  }

  if (*run_cmd) return rkhs::cmd_run(run, std::cout, std::cerr);
  if (*report_cmd) return rkhs::cmd_design_report(run, std::cout, std::cerr);
  return rkhs::cmd_sweep(sweep, std::cout, std::cerr);
}
