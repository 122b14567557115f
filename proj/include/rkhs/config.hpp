#pragma once

#include "rkhs/sim.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rkhs {

/// Fully resolved scenario file. Every field carries a value after
/// resolution; writing it back out and re-reading it reproduces the run.
struct ScenarioConfig {
  struct Plant {
    std::string family = "generic_linear";  // generic_linear | rigid_translational | rigid_rotational
    double mass = 4.0;                       // kg, rigid_translational
    Mat inertia;                             // kg·m², rigid_rotational
    Mat A, B, C;                             // generic_linear
    // zero | translational_force | rotational_drag | constant | kernel_expansion
    // | projected_translational_force
    std::string uncertainty = "zero";
    double uncertainty_coeff = 0.001;        // rotational_drag
    Vec uncertainty_constant;                // constant
    Mat uncertainty_alpha;                   // kernel_expansion, N×m
    std::string disturbance = "zero";        // zero | translational | rotational | custom
    std::vector<SignalTerm> disturbance_terms;
    double disturbance_scale = 1.0;
    double delta_bar = 0.0;
    std::string unmatched = "zero";          // zero | custom
    std::vector<SignalTerm> unmatched_terms;
    std::string controller = "zero";         // zero | constant | translational_pd | rotational_rate
    Mat controller_gain;
    Vec control_constant;
    Vec x0;
    Vec eta0;                                // rigid_rotational, rad
  } plant;

  struct Kernel {
    std::string family = "sobolev_matern";   // sobolev_matern | gaussian
    int order = 3;
    int dimension = 3;
    double length_scale = 1.0;
  } kernel;

  struct Centers {
    Vec lower, upper;
    int points_per_axis = 3;
    Mat points;                              // explicit centers (rows); overrides the lattice
    double jitter_initial = 1e-10;
    double jitter_max = 1e-6;
  } centers;

  struct Observer {
    Mat L, W;
    double epsilon = 1.0;
    Mat gamma_f;
    Vec x_hat0;
    Vec alpha0;
    Vec eta_hat0;
    std::vector<int> certified_states;       // 1-based
    double spr_tolerance = 1e-6;
  } observer;

  struct DeadZoneSection {
    double d = 0.0;
    double buffer = 0.01;
    std::string gate = "smooth";             // smooth | step
    Vec probe_lower, probe_upper;
    int probe_points_per_axis = 21;
    int residual_points_per_axis = 11;
  } deadzone;

  struct Sim {
    double t0 = 0.0;
    double t_final = 60.0;
    double h = 1e-3;
    int record_stride = 10;
  } sim;

  struct Output {
    std::string dir = "out";
  } output;
};

/// Parses TOML text, applies `key.path=value` overrides, validates the schema
/// (unknown keys are errors), and fills in defaults. Throws ConfigError.
ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// The resolved configuration as TOML text.
std::string effective_config_text(const ScenarioConfig& cfg);

/// Everything built from a resolved configuration.
struct BuiltScenario {
  Scenario scenario;
  std::shared_ptr<const CenterSet> centers;
  std::optional<ObserverDesign> design;
  SimConfig sim;
  Box probe;
};

/// Builds the plant, center set, observer design, and sim settings.
/// Throws ConfigError for inconsistent settings and DesignError for designs
/// that cannot be built.
BuiltScenario build_scenario(const ScenarioConfig& cfg);

}  // namespace rkhs
