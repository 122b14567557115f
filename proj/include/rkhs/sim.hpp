#pragma once

#include "rkhs/dynamics.hpp"
#include "rkhs/errors.hpp"
#include "rkhs/observer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rkhs {

/// Plant, excitation, and (optionally) the coefficients of the true
/// uncertainty in the observer's span, used for the Lyapunov diagnostic.
struct Scenario {
  std::string name;
  PlantModel plant;
  Controller controller;
  /// α with f = 𝒦_Ξ(·)α when f lies in the span (exact), or a least-squares
  /// surrogate of it (not exact). Without it V is not recorded.
  std::optional<Vec> alpha_reference;
  bool alpha_reference_exact = false;
};

struct SimConfig {
  double t0 = 0.0;
  double t_final = 60.0;
  double h = 1e-3;
  int record_stride = 10;
  Vec x0;
  Vec x_hat0;
  Vec alpha0;               ///< empty → zeros
  std::optional<Vec3> eta0; ///< rotational plants only
  std::optional<Vec3> eta_hat0;

  /// Number of fixed steps; throws ConfigError unless (t_final − t0)/h is an
  /// integer to 1e-9 relative accuracy.
  long long step_count() const;
  void validate() const;
};

struct SimRecord {
  double t = 0.0;
  Vec x, x_hat, e;
  double e_norm = 0.0;            ///< ‖x − x̂‖
  double e_norm_certified = 0.0;  ///< ‖(x − x̂)_S‖ on the certified states
  Vec y, u, f_true, f_hat;
  double sigma0 = 0.0;            ///< σ₀(‖e_S‖, d, ε_buf)
  double gate = 0.0;              ///< gate applied to the learning signal
  double V = 0.0;                 ///< NaN when no reference coefficients exist
  Vec eta, eta_hat;               ///< unwrapped attitude (rotational only)
  Vec alpha_hat;
  double step_gate_max = 0.0;     ///< max gate over the RK substages of the step ending here
};

struct SummaryOptions {
  double radius = 0.0;               ///< d + ε_buf
  double lyapunov_tolerance = 0.0;   ///< allowed V increase between consecutive records
  double trailing_fraction = 0.2;
};

struct ErrorMetrics {
  std::optional<double> t_enter;  ///< empty: never entered and stayed
  double ultimate_bound = 0.0;
  Vec steady_state_mean_abs;      ///< mean |e_i| over the trailing window
};

struct RunSummary {
  ErrorMetrics full;       ///< on ‖x − x̂‖
  ErrorMetrics certified;  ///< on the certified states
  double max_lyapunov_increase = 0.0;  ///< NaN when V is not recorded
  long long lyapunov_violations = 0;
  double max_delta_norm = 0.0;
  long long steps = 0;
  std::size_t records = 0;
};

struct RunResult {
  std::vector<SimRecord> records;
  RunSummary summary;
};

/// Non-finite state during integration; carries the last finite record.
class DivergenceError : public SimulationAbort {
 public:
  DivergenceError(const std::string& what, SimRecord last)
      : SimulationAbort(what), last_(std::move(last)) {}
  const SimRecord& last_finite() const noexcept { return last_; }

 private:
  SimRecord last_;
};

/// Classical RK4 on (x, x̂, α̂[, η, η̂]) with inputs sampled at substage times.
RunResult integrate(const Scenario& scenario, const ObserverDesign& design, const SimConfig& cfg);

/// Error metrics for one norm sequence.
ErrorMetrics error_metrics(const std::vector<SimRecord>& records, bool certified,
                           const SummaryOptions& opts);

RunSummary run_summary(const std::vector<SimRecord>& records, const SummaryOptions& opts);

/// One RK4 step of ż = f(t, z); exposed for tests.
template <class F>
Vec rk4_step(const F& f, double t, const Vec& z, double h) {
  const Vec k1 = f(t, z);
  const Vec k2 = f(t + 0.5 * h, z + 0.5 * h * k1);
  const Vec k3 = f(t + 0.5 * h, z + 0.5 * h * k2);
  const Vec k4 = f(t + h, z + h * k3);
  return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace rkhs
