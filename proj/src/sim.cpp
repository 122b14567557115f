#include "rkhs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rkhs {

long long SimConfig::step_count() const {
  const double span = (t_final - t0) / h;
  const double rounded = std::round(span);
  if (std::abs(span - rounded) > 1e-9 * std::max(1.0, span))
    throw ConfigError("sim: (t_final − t0) must be an integer multiple of h");
  return static_cast<long long>(rounded);
}

void SimConfig::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t_final) || !(t_final > t0))
    throw ConfigError("sim: t_final must exceed t0");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("sim: step h must be positive");
  if (record_stride < 1) throw ConfigError("sim: record_stride must be >= 1");
  step_count();
}

namespace {

// Stacked state z = [x; x̂; α̂; η; η̂], the attitude blocks only for rotational plants.
class CoupledSystem {
 public:
  CoupledSystem(const Scenario& sc, const ObserverDesign& design)
      : sc_(sc), design_(design), n_(design.state_dim()), p_(design.centers().coeff_dim()),
        rotational_(sc.plant.family == PlantFamily::RigidRotational) {
    if (sc.plant.state_dim() != n_ || sc.plant.output_dim() != design.output_dim())
      throw UsageError("scenario and observer design differ in dimensions");
  }

  Eigen::Index size() const { return 2 * n_ + p_ + (rotational_ ? 6 : 0); }
  bool rotational() const { return rotational_; }

  Vec pack(const SimConfig& cfg) const {
    Vec z(size());
    if (cfg.x0.size() != n_ || cfg.x_hat0.size() != n_)
      throw ConfigError("sim: initial state has the wrong dimension");
    const Vec alpha0 = cfg.alpha0.size() == 0 ? Vec::Zero(p_) : cfg.alpha0;
    if (alpha0.size() != p_) throw ConfigError("sim: alpha0 must have m·N entries");
    z << cfg.x0, cfg.x_hat0, alpha0, Vec::Zero(rotational_ ? 6 : 0);
    if (rotational_) {
      const Vec3 eta0 = cfg.eta0.value_or(Vec3::Zero());
      z.segment(2 * n_ + p_, 3) = eta0;
      z.segment(2 * n_ + p_ + 3, 3) = cfg.eta_hat0.value_or(eta0);
    }
    return z;
  }

  Vec derivative(double t, const Vec& z) const {
    const auto x = z.head(n_);
    AdaptiveObserverState obs{z.segment(n_, n_), z.segment(2 * n_, p_), t};
    const Vec u = sc_.controller(t, x);
    const Vec delta = sc_.plant.delta(t);
    delta_max_ = std::max(delta_max_, delta.norm());
    const Vec y = sc_.plant.C * x + delta;
    const double e_cert = design_.certified_part(x - obs.x_hat).norm();
    stage_gate_max_ = std::max(stage_gate_max_, gate_value(design_, e_cert));

    Vec dz(size());
    dz.head(n_) = plant_rhs(sc_.plant, x, u, t);
    dz.segment(n_, n_) = observer_rhs(design_, obs, y, u);
    dz.segment(2 * n_, p_) = adaptive_law_rhs(design_, obs, y, e_cert);
    if (rotational_) {
      const Eigen::Index off = 2 * n_ + p_;
      dz.segment(off, 3) = euler_kinematics_matrix(z.segment(off, 3)) * x.head(3);
      dz.segment(off + 3, 3) = euler_kinematics_matrix(z.segment(off + 3, 3)) * obs.x_hat.head(3);
    }
    return dz;
  }

  SimRecord record(double t, const Vec& z) const {
    SimRecord r;
    r.t = t;
    r.x = z.head(n_);
    r.x_hat = z.segment(n_, n_);
    r.alpha_hat = z.segment(2 * n_, p_);
    r.e = r.x - r.x_hat;
    r.e_norm = r.e.norm();
    r.e_norm_certified = design_.certified_part(r.e).norm();
    r.u = sc_.controller(t, r.x);
    r.y = sc_.plant.output(r.x, t);
    r.f_true = sc_.plant.f_true(r.y);
    r.f_hat = evaluate_element(design_.centers(), r.alpha_hat, r.y);
    r.sigma0 = sigma0(r.e_norm_certified, design_.deadzone().width, design_.deadzone().buffer);
    r.gate = gate_value(design_, r.e_norm_certified);
    r.V = sc_.alpha_reference
              ? lyapunov_value(design_, r.e, *sc_.alpha_reference - r.alpha_hat)
              : std::numeric_limits<double>::quiet_NaN();
    if (rotational_) {
      const Eigen::Index off = 2 * n_ + p_;
      r.eta = z.segment(off, 3);
      r.eta_hat = z.segment(off + 3, 3);
    }
    r.step_gate_max = stage_gate_max_;
    return r;
  }

  void reset_stage_gate() const { stage_gate_max_ = 0.0; }
  double delta_max() const { return delta_max_; }

 private:
  const Scenario& sc_;
  const ObserverDesign& design_;
  Eigen::Index n_, p_;
  bool rotational_;
  mutable double stage_gate_max_ = 0.0;
  mutable double delta_max_ = 0.0;
};

}  // namespace

RunResult integrate(const Scenario& scenario, const ObserverDesign& design, const SimConfig& cfg) {
  cfg.validate();
  const long long steps = cfg.step_count();
  CoupledSystem sys(scenario, design);
  Vec z = sys.pack(cfg);

  RunResult out;
  out.records.reserve(static_cast<std::size_t>(steps / cfg.record_stride + 2));
  out.records.push_back(sys.record(cfg.t0, z));

  auto rhs = [&sys](double t, const Vec& state) { return sys.derivative(t, state); };
  for (long long k = 0; k < steps; ++k) {
    const double t = cfg.t0 + static_cast<double>(k) * cfg.h;
    sys.reset_stage_gate();
    Vec next;
    try {
      next = rk4_step(rhs, t, z, cfg.h);
    } catch (const SimulationAbort& e) {
      std::ostringstream msg;
      msg << e.what() << " at t = " << t << "; last recorded t = " << out.records.back().t;
      throw SimulationAbort(msg.str());
    } catch (const InputDomainError& e) {
      // A stage state overflowed before the step completed.
      std::ostringstream msg;
      msg << "state became non-finite inside the step at t = " << t << " (" << e.what() << ")";
      throw DivergenceError(msg.str(), out.records.back());
    }
    if (!next.allFinite()) {
      std::ostringstream msg;
      msg << "state became non-finite at t = " << t + cfg.h;
      throw DivergenceError(msg.str(), out.records.back());
    }
    const long long done = k + 1;
    if (done % cfg.record_stride == 0 || done == steps) {
      try {
        out.records.push_back(sys.record(cfg.t0 + static_cast<double>(done) * cfg.h, next));
      } catch (const InputDomainError& e) {
        std::ostringstream msg;
        msg << "state overflowed at t = " << t + cfg.h << " (" << e.what() << ")";
        throw DivergenceError(msg.str(), out.records.back());
      }
    }
    z = std::move(next);
  }

  const double delta_max = sys.delta_max();
  if (delta_max > scenario.plant.delta_bar * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "scenario definition: measurement error reached " << delta_max
        << ", above the declared bound δ̄ = " << scenario.plant.delta_bar;
    throw ConfigError(msg.str());
  }

  SummaryOptions opts;
  opts.radius = design.deadzone().width + design.deadzone().buffer;
  opts.lyapunov_tolerance = 10.0 * std::pow(cfg.h, 5) * cfg.record_stride;
  out.summary = run_summary(out.records, opts);
  out.summary.max_delta_norm = delta_max;
  out.summary.steps = steps;
  return out;
}

ErrorMetrics error_metrics(const std::vector<SimRecord>& records, bool certified,
                           const SummaryOptions& opts) {
  ErrorMetrics m;
  if (records.empty()) return m;
  auto norm = [certified](const SimRecord& r) { return certified ? r.e_norm_certified : r.e_norm; };

  // Latest index from which the error stays inside the ball.
  std::size_t first_inside = records.size();
  for (std::size_t i = records.size(); i-- > 0;) {
    if (norm(records[i]) > opts.radius) break;
    first_inside = i;
  }
  if (first_inside < records.size()) m.t_enter = records[first_inside].t;

  const double t0 = records.front().t;
  const double tf = records.back().t;
  const double window_start = tf - opts.trailing_fraction * (tf - t0);
  const Eigen::Index n = records.front().e.size();
  m.steady_state_mean_abs = Vec::Zero(n);
  std::size_t count = 0;
  for (const auto& r : records) {
    if (r.t < window_start) continue;
    m.ultimate_bound = std::max(m.ultimate_bound, norm(r));
    m.steady_state_mean_abs += r.e.cwiseAbs();
    ++count;
  }
  if (count > 0) m.steady_state_mean_abs /= static_cast<double>(count);
  return m;
}

RunSummary run_summary(const std::vector<SimRecord>& records, const SummaryOptions& opts) {
  RunSummary s;
  s.records = records.size();
  s.full = error_metrics(records, false, opts);
  s.certified = error_metrics(records, true, opts);
  if (records.empty() || std::isnan(records.front().V)) {
    s.max_lyapunov_increase = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.max_lyapunov_increase = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    if (a.e_norm_certified < opts.radius || b.e_norm_certified < opts.radius) continue;
    const double inc = b.V - a.V;
    any = true;
    s.max_lyapunov_increase = std::max(s.max_lyapunov_increase, inc);
    if (inc > opts.lyapunov_tolerance) ++s.lyapunov_violations;
  }
  if (!any) s.max_lyapunov_increase = 0.0;
  return s;
}

}  // namespace rkhs
