#pragma once

#include "rkhs/config.hpp"

#include <complex>
#include <ostream>
#include <string>
#include <vector>

namespace rkhs {

/// Shortest-round-trip-safe formatting: 17 significant digits, '.' decimal.
std::string format_number(double v);

/// Column names of the time-series CSV for a run of this shape.
std::vector<std::string> timeseries_header(Eigen::Index n, Eigen::Index m, bool rotational);

void write_timeseries(std::ostream& out, const std::vector<SimRecord>& records, bool rotational);

/// Design quantities computed without simulating.
struct DesignReport {
  std::vector<std::complex<double>> error_eigenvalues;            ///< A − LC
  std::vector<std::complex<double>> certified_error_eigenvalues;  ///< certified block
  std::vector<int> certified_states;                              ///< 1-based
  double lyapunov_residual = 0.0;
  double pb_ct_residual = 0.0;
  bool spr_certified = false;
  double lambda_min_P = 0.0;
  double lambda_min_WtW_epsP = 0.0;
  double norm_PL = 0.0;
  double norm_C = 0.0;
  std::size_t centers = 0;
  double grammian_min_eig = 0.0;
  double grammian_max_eig = 0.0;
  double grammian_condition = 0.0;
  double jitter = 0.0;
  SupPowerResult sup_power;
  double residual_max = 0.0;          ///< max grid residual of f − Π_N f
  double residual_norm_estimate = 0.0;
  bool residual_exact = false;        ///< f lies in the span
  double E0 = 0.0;
  double d = 0.0;
  double d_N = 0.0;
  bool d_exceeds_d_N = false;
  std::vector<std::string> warnings;
};

DesignReport make_design_report(const ScenarioConfig& cfg, const BuiltScenario& built);

void write_design_report(std::ostream& out, const DesignReport& report);

/// Flat key=value block.
void write_summary(std::ostream& out, const ScenarioConfig& cfg, const std::vector<std::string>& overrides,
                   const DesignReport& report, const RunSummary& summary, double runtime_s);

}  // namespace rkhs
