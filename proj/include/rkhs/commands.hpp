#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rkhs {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitDivergence = 3 };

struct RunOptions {
  std::string config_path;
  std::string out_dir;  ///< empty: take output.dir from the config
  std::vector<std::string> overrides;
};

/// Builds, integrates, and writes timeseries.csv, summary.txt and
/// effective_config.toml under the output directory.
int cmd_run(const RunOptions& opts, std::ostream& log, std::ostream& err);

/// Prints the design quantities without simulating.
int cmd_design_report(const RunOptions& opts, std::ostream& out, std::ostream& err);

struct SweepOptions {
  RunOptions run;
  std::string axis;                 ///< config key (section.key) or an alias
  std::vector<std::string> values;
  /// Coupled axis: key=v1,v2,... with one value per sweep value.
  std::vector<std::string> with;
  bool design_only = false;         ///< skip integration
};

/// One row per value in sweep.csv: value, N, sup 𝒫_N, d_N, ultimate bound, T_enter.
int cmd_sweep(const SweepOptions& opts, std::ostream& log, std::ostream& err);

/// Maps sweep aliases (centers_per_axis, delta_scale, ...) to config keys.
std::string resolve_axis(const std::string& axis);

}  // namespace rkhs
