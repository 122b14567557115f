#include "rkhs/commands.hpp"

#include "rkhs/config.hpp"
#include "rkhs/errors.hpp"
#include "rkhs/output.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace rkhs {
namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

fs::path output_dir(const RunOptions& opts, const ScenarioConfig& cfg) {
  return opts.out_dir.empty() ? fs::path(cfg.output.dir) : fs::path(opts.out_dir);
}

// Runs body and maps library exceptions onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << " (last finite record at t = " << format_number(e.last_finite().t) << ")\n";
    return kExitDivergence;
  } catch (const SimulationAbort& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct SweepRow {
  std::size_t centers = 0;
  double sup_power = 0.0;
  double d_N = 0.0;
  std::optional<double> ultimate_bound;
  std::optional<double> t_enter;
  std::string log;
};

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = load_config(opts.config_path, opts.overrides);
    const BuiltScenario built = build_scenario(cfg);
    const DesignReport report = make_design_report(cfg, built);
    log << "E0 = " << format_number(report.E0) << "\n"
        << "d_N (advisory) = " << format_number(report.d_N) << "\n"
        << "spr_certified = " << (report.spr_certified ? "true" : "false") << "\n"
        << "grammian_condition = " << format_number(report.grammian_condition) << "\n";
    for (const auto& w : report.warnings) log << "warning: " << w << "\n";

    const auto start = std::chrono::steady_clock::now();
    const RunResult result = integrate(built.scenario, *built.design, built.sim);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const fs::path dir = output_dir(opts, cfg);
    fs::create_directories(dir);
    std::ostringstream csv, summary;
    write_timeseries(csv, result.records, built.scenario.plant.family == PlantFamily::RigidRotational);
    write_summary(summary, cfg, opts.overrides, report, result.summary, runtime);
    write_file(dir / "timeseries.csv", csv.str());
    write_file(dir / "summary.txt", summary.str());
    write_file(dir / "effective_config.toml", effective_config_text(cfg));
    log << "wrote " << (dir / "timeseries.csv").string() << " (" << result.records.size() << " records, "
        << format_number(runtime) << " s)\n";
    return int(kExitOk);
  });
}

int cmd_design_report(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = load_config(opts.config_path, opts.overrides);
    const BuiltScenario built = build_scenario(cfg);
    write_design_report(out, make_design_report(cfg, built));
    return int(kExitOk);
  });
}

std::string resolve_axis(const std::string& axis) {
  static const std::map<std::string, std::string> aliases = {
      {"centers_per_axis", "centers.points_per_axis"},
      {"delta_scale", "plant.disturbance_scale"},
      {"delta_bar", "plant.delta_bar"},
      {"d", "deadzone.d"},
      {"h", "sim.h"},
      {"length_scale", "kernel.length_scale"},
  };
  const auto it = aliases.find(axis);
  if (it != aliases.end()) return it->second;
  if (axis.find('.') == std::string::npos) throw ConfigError("unknown sweep axis '" + axis + "'");
  return axis;
}

int cmd_sweep(const SweepOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.values.empty()) throw ConfigError("sweep needs at least one value");
    const std::string key = resolve_axis(opts.axis);

    std::vector<std::pair<std::string, std::vector<std::string>>> coupled;
    for (const auto& w : opts.with) {
      const auto eq = w.find('=');
      if (eq == std::string::npos) throw ConfigError("--with expects key=v1,v2,...");
      auto vals = split(w.substr(eq + 1), ',');
      if (vals.size() != opts.values.size())
        throw ConfigError("--with " + w.substr(0, eq) + " needs one value per sweep value");
      coupled.emplace_back(resolve_axis(w.substr(0, eq)), std::move(vals));
    }

    // Validate every configuration before running anything.
    std::vector<std::vector<std::string>> overrides;
    std::vector<ScenarioConfig> configs;
    for (std::size_t i = 0; i < opts.values.size(); ++i) {
      auto o = opts.run.overrides;
      o.push_back(key + "=" + opts.values[i]);
      for (const auto& [k, vals] : coupled) o.push_back(k + "=" + vals[i]);
      configs.push_back(load_config(opts.run.config_path, o));
      overrides.push_back(std::move(o));
    }
    const fs::path dir = output_dir(opts.run, configs.front());

    // Each value runs in its own worker and output directory.
    std::vector<std::future<SweepRow>> jobs;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, [&, i] {
        const ScenarioConfig& cfg = configs[i];
        const BuiltScenario built = build_scenario(cfg);
        const DesignReport report = make_design_report(cfg, built);
        SweepRow row;
        row.centers = report.centers;
        row.sup_power = report.sup_power.value;
        row.d_N = report.d_N;
        if (!opts.design_only) {
          const auto start = std::chrono::steady_clock::now();
          const RunResult result = integrate(built.scenario, *built.design, built.sim);
          const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          row.ultimate_bound = result.summary.full.ultimate_bound;
          row.t_enter = result.summary.full.t_enter;
          const fs::path sub = dir / ("run_" + std::to_string(i));
          fs::create_directories(sub);
          std::ostringstream summary;
          write_summary(summary, cfg, overrides[i], report, result.summary, runtime);
          write_file(sub / "summary.txt", summary.str());
          write_file(sub / "effective_config.toml", effective_config_text(cfg));
        }
        return row;
      }));
    }

    std::ostringstream csv;
    csv << "value,N,sup_power,d_N,ultimate_bound,t_enter\n";
    std::vector<SweepRow> rows;
    for (auto& j : jobs) rows.push_back(j.get());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      csv << opts.values[i] << ',' << r.centers << ',' << format_number(r.sup_power) << ','
          << format_number(r.d_N) << ',' << (r.ultimate_bound ? format_number(*r.ultimate_bound) : "") << ','
          << (r.t_enter ? format_number(*r.t_enter) : (r.ultimate_bound ? "not reached" : "")) << '\n';
    }
    fs::create_directories(dir);
    write_file(dir / "sweep.csv", csv.str());
    log << csv.str();
    return int(kExitOk);
  });
}

}  // namespace rkhs
