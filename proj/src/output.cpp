#include "rkhs/output.hpp"

#include "rkhs/linalg.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace rkhs {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void numbered(std::vector<std::string>& cols, const std::string& stem, Eigen::Index count) {
  for (Eigen::Index i = 1; i <= count; ++i) cols.push_back(stem + std::to_string(i));
}

void put(std::ostream& out, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << format_number(v(i));
}

std::string complex_list(const std::vector<std::complex<double>>& values) {
  std::ostringstream s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s << ' ';
    s << format_number(values[i].real());
    if (values[i].imag() != 0.0) s << (values[i].imag() < 0 ? "-" : "+") << format_number(std::abs(values[i].imag())) << 'i';
  }
  return s.str();
}

std::string vec_list(const Vec& v) {
  std::ostringstream s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? " " : "") << format_number(v(i));
  return s.str();
}

std::vector<std::complex<double>> to_list(const Eigen::VectorXcd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

std::vector<std::string> timeseries_header(Eigen::Index n, Eigen::Index m, bool rotational) {
  std::vector<std::string> cols{"t"};
  numbered(cols, "x", n);
  numbered(cols, "xhat", n);
  cols.insert(cols.end(), {"e_norm", "sigma0", "V", "e_norm_certified", "gate"});
  numbered(cols, "e", n);
  numbered(cols, "y", m);
  numbered(cols, "u", m);
  numbered(cols, "f", m);
  numbered(cols, "fhat", m);
  if (rotational) {
    numbered(cols, "eta", 3);
    numbered(cols, "etahat", 3);
  }
  return cols;
}

void write_timeseries(std::ostream& out, const std::vector<SimRecord>& records, bool rotational) {
  if (records.empty()) return;
  const auto& first = records.front();
  const auto header = timeseries_header(first.x.size(), first.y.size(), rotational);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : records) {
    out << format_number(r.t);
    put(out, r.x);
    put(out, r.x_hat);
    for (double v : {r.e_norm, r.sigma0, r.V, r.e_norm_certified, r.gate}) out << ',' << format_number(v);
    put(out, r.e);
    put(out, r.y);
    put(out, r.u);
    put(out, r.f_true);
    put(out, r.f_hat);
    if (rotational) {
      put(out, wrap_attitude(Vec3(r.eta)));
      put(out, wrap_attitude(Vec3(r.eta_hat)));
    }
    out << '\n';
  }
}

DesignReport make_design_report(const ScenarioConfig& cfg, const BuiltScenario& built) {
  const ObserverDesign& design = *built.design;
  const auto& lure = design.lure();
  DesignReport r;
  r.error_eigenvalues = to_list(eigenvalues(design.error_matrix()));
  r.certified_error_eigenvalues = to_list(eigenvalues(design.certified_error_matrix()));
  for (int i : design.certified_states()) r.certified_states.push_back(i + 1);
  r.lyapunov_residual = lure.lyapunov_residual;
  r.pb_ct_residual = lure.pb_ct_residual;
  r.spr_certified = lure.certified;
  r.lambda_min_P = lambda_min(lure.P);
  r.lambda_min_WtW_epsP = lambda_min(lure.W.transpose() * lure.W + lure.epsilon * lure.P);
  r.norm_PL = spectral_norm(lure.P * design.certified_L());
  r.norm_C = spectral_norm(design.certified_C());

  const CenterSet& centers = *built.centers;
  r.centers = centers.size();
  std::tie(r.grammian_min_eig, r.grammian_max_eig) = centers.eigenvalue_range();
  r.grammian_condition = r.grammian_min_eig > 0.0 ? r.grammian_max_eig / r.grammian_min_eig
                                                  : std::numeric_limits<double>::infinity();
  r.jitter = centers.jitter();
  r.sup_power = sup_power_function(centers, built.probe, cfg.deadzone.probe_points_per_axis);

  if (built.scenario.alpha_reference_exact) {
    r.residual_exact = true;
  } else {
    const auto grid = lattice(built.probe, cfg.deadzone.residual_points_per_axis);
    const JitterPolicy jitter{cfg.centers.jitter_initial, 10.0, cfg.centers.jitter_max};
    r.residual_max = project_into_span(centers, built.scenario.plant.f_true, grid, jitter).max_residual;
    // The product sup 𝒫_N · estimate then equals the largest pointwise residual.
    r.residual_norm_estimate = r.sup_power.value > 0.0 ? r.residual_max / r.sup_power.value : 0.0;
  }

  r.E0 = compute_E0(design);
  r.d = design.deadzone().width;
  r.d_N = compute_min_deadzone(design, r.sup_power.value, r.residual_norm_estimate);
  r.d_exceeds_d_N = r.d > r.d_N;

  if (!r.d_exceeds_d_N) {
    std::ostringstream w;
    w << "dead-zone width d = " << format_number(r.d) << " does not exceed the advisory d_N = " << format_number(r.d_N);
    r.warnings.push_back(w.str());
  }
  if (!r.spr_certified) {
    std::ostringstream w;
    w << "PB = C^T fails by " << format_number(r.pb_ct_residual) << "; the design is not SPR-certified";
    r.warnings.push_back(w.str());
  }
  if (!design.fully_certified()) {
    r.warnings.push_back("only states " + [&] {
      std::string s;
      for (int i : r.certified_states) s += (s.empty() ? "" : ",") + std::to_string(i);
      return s;
    }() + " are covered by the convergence guarantee");
  }
  if (r.jitter > 0.0) r.warnings.push_back("Grammian needed diagonal jitter " + format_number(r.jitter));
  if (design.deadzone().gate == GateKind::Step && r.E0 == 0.0 && built.scenario.plant.delta_bar > 0.0)
    r.warnings.push_back("step gate with E0 = 0 never stops adaptation");
  return r;
}

void write_design_report(std::ostream& out, const DesignReport& r) {
  out << "error_eigenvalues = " << complex_list(r.error_eigenvalues) << '\n'
      << "certified_states = ";
  for (std::size_t i = 0; i < r.certified_states.size(); ++i) out << (i ? "," : "") << r.certified_states[i];
  out << '\n'
      << "certified_error_eigenvalues = " << complex_list(r.certified_error_eigenvalues) << '\n'
      << "lure_lyapunov_residual = " << format_number(r.lyapunov_residual) << '\n'
      << "lure_pb_ct_residual = " << format_number(r.pb_ct_residual) << '\n'
      << "spr_certified = " << (r.spr_certified ? "true" : "false") << '\n'
      << "lambda_min_P = " << format_number(r.lambda_min_P) << '\n'
      << "lambda_min_WtW_plus_epsP = " << format_number(r.lambda_min_WtW_epsP) << '\n'
      << "norm_PL = " << format_number(r.norm_PL) << '\n'
      << "norm_C = " << format_number(r.norm_C) << '\n'
      << "centers = " << r.centers << '\n'
      << "grammian_eig_min = " << format_number(r.grammian_min_eig) << '\n'
      << "grammian_eig_max = " << format_number(r.grammian_max_eig) << '\n'
      << "grammian_condition = " << format_number(r.grammian_condition) << '\n'
      << "grammian_jitter = " << format_number(r.jitter) << '\n'
      << "sup_power = " << format_number(r.sup_power.value) << '\n'
      << "sup_power_argmax = " << vec_list(r.sup_power.argmax) << '\n'
      << "sup_power_points_per_axis = " << r.sup_power.points_per_axis << '\n'
      << "residual_in_span = " << (r.residual_exact ? "true" : "false") << '\n'
      << "residual_max = " << format_number(r.residual_max) << '\n'
      << "residual_norm_estimate = " << format_number(r.residual_norm_estimate) << '\n'
      << "E0 = " << format_number(r.E0) << '\n'
      << "d = " << format_number(r.d) << '\n'
      << "d_N = " << format_number(r.d_N) << '\n'
      << "d_exceeds_d_N = " << (r.d_exceeds_d_N ? "true" : "false") << '\n'
      << "warnings = " << r.warnings.size() << '\n';
  for (const auto& w : r.warnings) out << "warning = " << w << '\n';
}

void write_summary(std::ostream& out, const ScenarioConfig& cfg, const std::vector<std::string>& overrides,
                   const DesignReport& report, const RunSummary& s, double runtime_s) {
  auto metric = [&out](const std::string& prefix, const ErrorMetrics& m) {
    out << prefix << "t_enter = " << (m.t_enter ? format_number(*m.t_enter) : "not reached") << '\n'
        << prefix << "ultimate_bound = " << format_number(m.ultimate_bound) << '\n';
  };
  out << "scenario = " << cfg.plant.family << '\n';
  for (const auto& o : overrides) out << "override = " << o << '\n';
  out << "t0 = " << format_number(cfg.sim.t0) << '\n'
      << "t_final = " << format_number(cfg.sim.t_final) << '\n'
      << "h = " << format_number(cfg.sim.h) << '\n'
      << "record_stride = " << cfg.sim.record_stride << '\n'
      << "steps = " << s.steps << '\n'
      << "records = " << s.records << '\n'
      << "radius = " << format_number(cfg.deadzone.d + cfg.deadzone.buffer) << '\n';
  metric("", s.full);
  out << "steady_state_mean_abs = " << vec_list(s.full.steady_state_mean_abs) << '\n';
  metric("certified_", s.certified);
  out << "max_lyapunov_increase = " << format_number(s.max_lyapunov_increase) << '\n'
      << "lyapunov_violations = " << s.lyapunov_violations << '\n'
      << "max_delta_norm = " << format_number(s.max_delta_norm) << '\n'
      << "delta_bar = " << format_number(cfg.plant.delta_bar) << '\n'
      << "E0 = " << format_number(report.E0) << '\n'
      << "d_N = " << format_number(report.d_N) << '\n'
      << "spr_certified = " << (report.spr_certified ? "true" : "false") << '\n'
      << "grammian_condition = " << format_number(report.grammian_condition) << '\n'
      << "warnings = " << report.warnings.size() << '\n'
      << "runtime_s = " << format_number(runtime_s) << '\n';
}

}  // namespace rkhs
