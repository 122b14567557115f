#pragma once

#include "rkhs/kernel.hpp"
#include "rkhs/linalg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rkhs {

/// Smooth dead-zone σ₀: 0 on [0,d], (e−d)²/(2ε) on [d,d+ε], e−d−ε/2 beyond.
double sigma0(double e_norm, double d, double eps);

/// Derivative of σ₀ with respect to e_norm; takes values in [0,1].
double sigma0_derivative(double e_norm, double d, double eps);

/// 1 when ‖e‖ ≥ E0 (outside the open ball), else 0.
int mu_step(const Vec& e, double e0);
int mu_step(double e_norm, double e0);

enum class GateKind {
  Smooth,  ///< σ₀(‖e‖, d, ε_buf) multiplies the learning signal
  Step,    ///< μ_step(‖e‖, E₀) with E₀ computed from the design
};

struct DeadZone {
  double width = 0.0;   ///< d
  double buffer = 0.01; ///< ε_buf
  GateKind gate = GateKind::Smooth;
};

/// Everything needed to build an ObserverDesign.
struct ObserverDesignInputs {
  Mat A, B, C, L;
  Mat gamma_f;          ///< m×m symmetric positive-definite adaptive rate
  Mat W;
  double epsilon = 1.0;
  DeadZone deadzone;
  double delta_bar = 0.0;
  std::shared_ptr<const CenterSet> centers;
  /// 0-based state indices whose observation error is certified by the
  /// Lyapunov analysis. Empty means all n states. The remaining states must
  /// not feed back into the certified block through A − LC and must not be
  /// seen by C; their error is propagated but not bounded.
  std::vector<int> certified_states;
  double spr_tolerance = 1e-6;
};

/// Validated observer design. Immutable once built.
class ObserverDesign {
 public:
  /// Throws DesignError when the certified block of A − LC is not Hurwitz,
  /// Γ_f is not SPD, the dead-zone parameters are invalid, or the certified
  /// block is not decoupled from the rest.
  static ObserverDesign build(ObserverDesignInputs in);

  const Mat& A() const noexcept { return in_.A; }
  const Mat& B() const noexcept { return in_.B; }
  const Mat& C() const noexcept { return in_.C; }
  const Mat& L() const noexcept { return in_.L; }
  const Mat& gamma_f() const noexcept { return in_.gamma_f; }
  const DeadZone& deadzone() const noexcept { return in_.deadzone; }
  double delta_bar() const noexcept { return in_.delta_bar; }
  const CenterSet& centers() const noexcept { return *in_.centers; }
  std::shared_ptr<const CenterSet> centers_ptr() const noexcept { return in_.centers; }
  const LureSolution& lure() const noexcept { return lure_; }
  const std::vector<int>& certified_states() const noexcept { return certified_; }
  bool fully_certified() const noexcept;

  Eigen::Index state_dim() const noexcept { return in_.A.rows(); }
  int output_dim() const noexcept { return static_cast<int>(in_.C.rows()); }

  /// A − LC over all states.
  Mat error_matrix() const { return in_.A - in_.L * in_.C; }
  /// Blocks of A − LC, B, C, L restricted to the certified states.
  const Mat& certified_error_matrix() const noexcept { return a_e_cert_; }
  const Mat& certified_B() const noexcept { return b_cert_; }
  const Mat& certified_C() const noexcept { return c_cert_; }
  const Mat& certified_L() const noexcept { return l_cert_; }

  /// The certified components of a full state-error vector.
  Vec certified_part(const Vec& e) const;

  /// E₀, cached at build time.
  double step_radius() const noexcept { return e0_; }

 private:
  ObserverDesign() = default;

  ObserverDesignInputs in_;
  std::vector<int> certified_;
  Mat a_e_cert_, b_cert_, c_cert_, l_cert_;
  LureSolution lure_;
  Mat gamma_inv_;
  double e0_ = 0.0;

  friend double lyapunov_value(const ObserverDesign&, const Vec&, const Vec&);
};

struct AdaptiveObserverState {
  Vec x_hat;
  Vec alpha_hat;  ///< center-major coefficients of f̂_N
  double t = 0.0;
};

/// E₀ = δ̄‖LᵀP‖₂ / (ε λ_min(P) + λ_min(WᵀW)), on the certified block.
double compute_E0(const ObserverDesign& design);

/// d_N = 2‖C‖₂(sup_power·residual + ‖PL‖₂ δ̄) / λ_min(WᵀW + εP).
/// Advisory: the residual norm of the projection is only estimated.
double compute_min_deadzone(const ObserverDesign& design, double sup_power,
                            double residual_norm_estimate);

/// Gate multiplying the learning signal for the design's gate kind.
double gate_value(const ObserverDesign& design, double e_norm_signal);

/// α̂̇ = gate · (I_N ⊗ Γ_f) 𝕂⁻¹ 𝒦_Ξ(y)ᵀ (y − Cx̂).
Vec adaptive_law_rhs(const ObserverDesign& design, const AdaptiveObserverState& state,
                     const Vec& y, double e_norm_signal);

/// x̂̇ = Ax̂ + L(y − Cx̂) + B(u + f̂_N(y)).
Vec observer_rhs(const ObserverDesign& design, const AdaptiveObserverState& state, const Vec& y,
                 const Vec& u);

/// e_Sᵀ P e_S + α̃ᵀ (G ⊗ Γ_f⁻¹) α̃ with e_S the certified part of e.
/// This is the Lyapunov function restricted to the finite-dimensional span.
double lyapunov_value(const ObserverDesign& design, const Vec& e, const Vec& alpha_err);

}  // namespace rkhs
