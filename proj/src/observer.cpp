#include "rkhs/observer.hpp"

#include "rkhs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rkhs {

double sigma0(double e_norm, double d, double eps) {
  if (e_norm <= d) return 0.0;
  if (e_norm <= d + eps) return (e_norm - d) * (e_norm - d) / (2.0 * eps);
  // Offset by eps/2 so the linear branch continues the quadratic one.
  return e_norm - d - 0.5 * eps;
}

double sigma0_derivative(double e_norm, double d, double eps) {
  if (e_norm <= d) return 0.0;
  if (e_norm <= d + eps) return std::min(1.0, (e_norm - d) / eps);
  return 1.0;
}

int mu_step(double e_norm, double e0) { return e_norm >= e0 ? 1 : 0; }

int mu_step(const Vec& e, double e0) { return mu_step(e.norm(), e0); }

namespace {

Mat select_rows(const Mat& m, const std::vector<int>& idx) {
  Mat out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  return out;
}

Mat select_cols(const Mat& m, const std::vector<int>& idx) {
  Mat out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = m.col(idx[i]);
  return out;
}

}  // namespace

ObserverDesign ObserverDesign::build(ObserverDesignInputs in) {
  const Eigen::Index n = in.A.rows();
  if (in.A.cols() != n) throw UsageError("observer design: A is not square");
  if (!in.centers) throw UsageError("observer design: missing center set");
  const int m = in.centers->output_dim();
  if (in.B.rows() != n || in.B.cols() != m) throw UsageError("observer design: B must be n×m");
  if (in.C.rows() != m || in.C.cols() != n) throw UsageError("observer design: C must be m×n");
  if (in.L.rows() != n || in.L.cols() != m) throw UsageError("observer design: L must be n×m");
  if (in.gamma_f.rows() != m || in.gamma_f.cols() != m)
    throw UsageError("observer design: Γ_f must be m×m");
  if (in.centers->size() == 0) throw DesignError("observer design: empty center set");

  if (max_abs(in.gamma_f - in.gamma_f.transpose()) > 0.0)
    throw DesignError("observer design: Γ_f is not symmetric");
  if (!(lambda_min(in.gamma_f) > 0.0)) throw DesignError("observer design: Γ_f is not positive definite");
  if (!(in.deadzone.width >= 0.0) || !std::isfinite(in.deadzone.width))
    throw DesignError("observer design: dead-zone width d must be >= 0");
  if (!(in.deadzone.buffer > 0.0) || !std::isfinite(in.deadzone.buffer))
    throw DesignError("observer design: buffer width must be > 0");
  if (!(in.delta_bar >= 0.0) || !std::isfinite(in.delta_bar))
    throw DesignError("observer design: δ̄ must be >= 0");

  ObserverDesign d;
  if (in.certified_states.empty()) {
    d.certified_.resize(static_cast<std::size_t>(n));
    std::iota(d.certified_.begin(), d.certified_.end(), 0);
  } else {
    d.certified_ = in.certified_states;
    std::sort(d.certified_.begin(), d.certified_.end());
    if (std::adjacent_find(d.certified_.begin(), d.certified_.end()) != d.certified_.end())
      throw UsageError("observer design: repeated certified state index");
    if (d.certified_.front() < 0 || d.certified_.back() >= n)
      throw UsageError("observer design: certified state index out of range");
  }
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(d.certified_.begin(), d.certified_.end(), i)) rest.push_back(i);

  const Mat a_e = in.A - in.L * in.C;
  if (!rest.empty()) {
    // The certified error block must evolve on its own.
    if (max_abs(select_cols(select_rows(a_e, d.certified_), rest)) > 0.0)
      throw DesignError("observer design: uncertified states feed the certified block through A − LC");
    if (max_abs(select_cols(in.C, rest)) > 0.0)
      throw DesignError("observer design: C depends on uncertified states");
  }
  d.a_e_cert_ = select_cols(select_rows(a_e, d.certified_), d.certified_);
  d.b_cert_ = select_rows(in.B, d.certified_);
  d.c_cert_ = select_cols(in.C, d.certified_);
  d.l_cert_ = select_rows(in.L, d.certified_);

  if (!is_hurwitz(d.a_e_cert_)) {
    const Eigen::VectorXcd eig = eigenvalues(d.a_e_cert_);
    std::ostringstream msg;
    msg << "observer design: A − LC is not Hurwitz on the certified states; eigenvalues:";
    for (Eigen::Index i = 0; i < eig.size(); ++i) msg << ' ' << eig(i).real() << '+' << eig(i).imag() << 'i';
    throw DesignError(msg.str());
  }
  if (in.W.cols() != d.a_e_cert_.rows())
    throw UsageError("observer design: W must have one column per certified state");

  d.lure_ = design_lure(d.a_e_cert_, d.b_cert_, d.c_cert_, in.epsilon, in.W, in.spr_tolerance);
  d.gamma_inv_ = in.gamma_f.inverse();
  d.in_ = std::move(in);
  d.e0_ = compute_E0(d);
  return d;
}

bool ObserverDesign::fully_certified() const noexcept {
  return static_cast<Eigen::Index>(certified_.size()) == state_dim();
}

Vec ObserverDesign::certified_part(const Vec& e) const {
  if (e.size() != state_dim()) throw UsageError("certified_part: state length mismatch");
  Vec out(static_cast<Eigen::Index>(certified_.size()));
  for (std::size_t i = 0; i < certified_.size(); ++i) out(static_cast<Eigen::Index>(i)) = e(certified_[i]);
  return out;
}

double compute_E0(const ObserverDesign& design) {
  const auto& lure = design.lure();
  const double denom =
      lure.epsilon * lambda_min(lure.P) + lambda_min(lure.W.transpose() * lure.W);
  if (!(denom > 0.0)) throw DesignError("E0: ε·λ_min(P) + λ_min(WᵀW) must be positive");
  return design.delta_bar() * spectral_norm(design.certified_L().transpose() * lure.P) / denom;
}

double compute_min_deadzone(const ObserverDesign& design, double sup_power,
                            double residual_norm_estimate) {
  if (!(sup_power >= 0.0) || !(residual_norm_estimate >= 0.0))
    throw InputDomainError("d_N: sup power and residual estimate must be >= 0");
  const auto& lure = design.lure();
  const Mat q = lure.W.transpose() * lure.W + lure.epsilon * lure.P;
  const double denom = lambda_min(q);
  if (!(denom > 0.0)) throw DesignError("d_N: λ_min(WᵀW + εP) must be positive");
  const double c_norm = spectral_norm(design.certified_C());
  const double pl_norm = spectral_norm(lure.P * design.certified_L());
  return 2.0 * c_norm * (sup_power * residual_norm_estimate + pl_norm * design.delta_bar()) / denom;
}

double gate_value(const ObserverDesign& design, double e_norm_signal) {
  const auto& dz = design.deadzone();
  if (dz.gate == GateKind::Step) return mu_step(e_norm_signal, design.step_radius());
  return sigma0(e_norm_signal, dz.width, dz.buffer);
}

Vec adaptive_law_rhs(const ObserverDesign& design, const AdaptiveObserverState& state, const Vec& y,
                     double e_norm_signal) {
  const auto& centers = design.centers();
  const int m = centers.output_dim();
  if (y.size() != m) throw UsageError("adaptive law: output dimension mismatch");
  if (state.x_hat.size() != design.state_dim()) throw UsageError("adaptive law: state dimension mismatch");
  if (state.alpha_hat.size() != centers.coeff_dim())
    throw UsageError("adaptive law: coefficient dimension mismatch");

  const double gate = gate_value(design, e_norm_signal);
  if (gate == 0.0) return Vec::Zero(centers.coeff_dim());

  // 𝒦_Ξ(y)ᵀ s stacks k_j(y)·s, i.e. the m×N matrix s kᵀ; 𝕂⁻¹ acts as
  // right-multiplication by G⁻¹, giving s (G⁻¹k)ᵀ.
  const Vec s = y - design.C() * state.x_hat;
  Vec z = centers.kernel_row(y);
  const Mat& f = centers.scalar_factor();
  f.triangularView<Eigen::Lower>().solveInPlace(z);
  f.transpose().triangularView<Eigen::Upper>().solveInPlace(z);
  const Mat rate = gate * (design.gamma_f() * s) * z.transpose();  // m×N
  return Eigen::Map<const Vec>(rate.data(), rate.size());
}

Vec observer_rhs(const ObserverDesign& design, const AdaptiveObserverState& state, const Vec& y,
                 const Vec& u) {
  if (state.x_hat.size() != design.state_dim()) throw UsageError("observer: state dimension mismatch");
  if (y.size() != design.output_dim() || u.size() != design.B().cols())
    throw UsageError("observer: input or output dimension mismatch");
  const Vec f_hat = evaluate_element(design.centers(), state.alpha_hat, y);
  return design.A() * state.x_hat + design.L() * (y - design.C() * state.x_hat) +
         design.B() * (u + f_hat);
}

double lyapunov_value(const ObserverDesign& design, const Vec& e, const Vec& alpha_err) {
  const auto& centers = design.centers();
  if (alpha_err.size() != centers.coeff_dim()) throw UsageError("lyapunov_value: coefficient length");
  const Vec es = design.certified_part(e);
  const double state_term = es.dot(design.lure().P * es);
  const int m = centers.output_dim();
  Eigen::Map<const Mat> blocks(alpha_err.data(), m, static_cast<Eigen::Index>(centers.size()));
  // Σ_ij G_ij α̃_iᵀ Γ⁻¹ α̃_j
  const double coeff_term = (blocks.transpose() * design.gamma_inv_ * blocks)
                                .cwiseProduct(centers.scalar_grammian())
                                .sum();
  return state_term + coeff_term;
}

}  // namespace rkhs
