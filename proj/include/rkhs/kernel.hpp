#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace rkhs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class KernelFamily { SobolevMatern, Gaussian };

/// A radial Mercer kernel 𝔎(y1, y2) = σ(‖y1 − y2‖) together with the output
/// dimension m of the induced diagonal operator-valued kernel 𝔎(y1, y2)·I_m.
///
/// The Sobolev-Matérn family is normalized so that σ(0) = 1:
///
///   σ(r) = 2^{1−ν} / Γ(ν) · s^ν K_ν(s),   s = r / ℓ,   ν = k − d/2,
///
/// with K_ν the modified Bessel function of the second kind. Half-integer ν
/// uses the exact polynomial-times-exponential closed form. The Gaussian
/// family is σ(r) = exp(−r² / (2ℓ²)).
class KernelModel {
 public:
  static KernelModel sobolev_matern(int order, int dimension, double length_scale,
                                    int output_dim);
  static KernelModel gaussian(double length_scale, int output_dim);

  KernelFamily family() const noexcept { return family_; }
  int output_dim() const noexcept { return output_dim_; }
  double length_scale() const noexcept { return length_scale_; }
  int order() const noexcept { return order_; }
  int dimension() const noexcept { return dimension_; }
  /// Matérn smoothness ν = k − d/2 (zero for the Gaussian family).
  double smoothness() const noexcept { return nu_; }

  /// σ(r) for r ≥ 0.
  double radial(double r) const;

  /// Scalar kernel 𝔎(y1, y2). Throws InputDomainError on non-finite input.
  double operator()(const Vec& y1, const Vec& y2) const;

 private:
  KernelModel() = default;

  KernelFamily family_ = KernelFamily::Gaussian;
  int output_dim_ = 1;
  double length_scale_ = 1.0;
  int order_ = 0;
  int dimension_ = 0;
  double nu_ = 0.0;
};

/// Diagonal jitter escalation used when a Gram factorization fails.
struct JitterPolicy {
  double initial = 1e-10;
  double growth = 10.0;
  double max = 1e-6;
};

/// Ordered centers ξ_1..ξ_N with the factorized Grammian.
///
/// Coefficient vectors are center-major: α = [α_1ᵀ … α_Nᵀ]ᵀ with α_j ∈ ℝᵐ, so
/// entry (j·m + c) is component c of center j. Because every Grammian block is
/// 𝔎(ξ_i, ξ_j)·I_m, the mN×mN Grammian is G ⊗ I_m for the scalar N×N Gram
/// matrix G, and its Cholesky factor is chol(G) ⊗ I_m. Only chol(G) is stored;
/// products with 𝕂⁻¹ are triangular solves with it.
class CenterSet {
 public:
  /// Assembles and factorizes the Grammian. Throws DesignError on an empty or
  /// duplicated center list and IllConditionedCentersError when the factor
  /// fails even at the maximum jitter.
  static CenterSet assemble(const KernelModel& model, std::vector<Vec> centers,
                            const JitterPolicy& jitter = {});

  /// N = 0 set; only the degenerate power-function query is meaningful.
  static CenterSet empty(const KernelModel& model);

  const KernelModel& kernel() const noexcept { return model_; }
  std::size_t size() const noexcept { return centers_.size(); }
  int output_dim() const noexcept { return model_.output_dim(); }
  /// m·N, the length of a coefficient vector.
  Eigen::Index coeff_dim() const noexcept {
    return static_cast<Eigen::Index>(centers_.size()) * model_.output_dim();
  }
  const std::vector<Vec>& centers() const noexcept { return centers_; }
  /// Diagonal jitter added before the successful factorization (0 if none).
  double jitter() const noexcept { return jitter_; }

  /// Scalar Gram matrix G (without jitter).
  const Mat& scalar_grammian() const noexcept { return gram_; }
  /// Full mN×mN Grammian 𝕂 (without jitter), assembled on demand.
  Mat grammian() const;
  /// Lower Cholesky factor of G + jitter·I.
  const Mat& scalar_factor() const noexcept { return factor_; }

  /// k(y) = [𝔎(y, ξ_1), …, 𝔎(y, ξ_N)]ᵀ.
  Vec kernel_row(const Vec& y) const;
  /// 𝒦_Ξ(y) = [𝔎(y,ξ_1)·I_m, …, 𝔎(y,ξ_N)·I_m], an m×mN matrix.
  Mat kernel_matrix(const Vec& y) const;

  /// 𝕂⁻¹ v for a center-major stacked vector v ∈ ℝ^{mN}.
  Vec solve(const Vec& v) const;
  /// 𝕂 v for a center-major stacked vector v.
  Vec multiply(const Vec& v) const;

  /// Extreme eigenvalues of G, used as a condition estimate in reports.
  std::pair<double, double> eigenvalue_range() const;

 private:
  CenterSet(const KernelModel& model) : model_(model) {}

  KernelModel model_;
  std::vector<Vec> centers_;
  Mat gram_;
  Mat factor_;
  double jitter_ = 0.0;
};

/// Element Σ_j 𝒦_{ξ_j}(·) α_j of the finite-dimensional native space.
class RkhsElement {
 public:
  RkhsElement(std::shared_ptr<const CenterSet> centers, Vec coeffs);

  const CenterSet& centers() const noexcept { return *centers_; }
  const Vec& coeffs() const noexcept { return coeffs_; }

  /// 𝒦_Ξ(y)·α.
  Vec operator()(const Vec& y) const;
  /// Native-space norm² αᵀ𝕂α.
  double native_norm_squared() const;

 private:
  std::shared_ptr<const CenterSet> centers_;
  Vec coeffs_;
};

/// 𝒦_Ξ(y)·α without wrapping α in an RkhsElement.
Vec evaluate_element(const CenterSet& centers, const Vec& alpha, const Vec& y);

/// Axis-aligned box; lower == upper on an axis is allowed.
struct Box {
  Vec lower;
  Vec upper;
};

/// Tensor lattice over a box, last axis varying fastest. A single point per
/// axis places it at the box midpoint.
std::vector<Vec> lattice(const Box& box, int points_per_axis);

/// max_i sqrt|𝒦_ii(y,y) − 𝒦_N,ii(y,y)|. For the diagonal kernel every i gives
/// the same value, so the scalar interpolation residual is returned.
double power_function(const CenterSet& centers, const Vec& y);

struct SupPowerResult {
  double value = 0.0;      ///< max over the grid; a lower bound of the true sup
  Vec argmax;              ///< grid point attaining it
  Vec spacing;             ///< grid spacing per axis
  int points_per_axis = 0;
};

SupPowerResult sup_power_function(const CenterSet& centers, const Box& probe,
                                  int points_per_axis);

struct Projection {
  Vec coeffs;                ///< center-major α of the fitted element
  double max_residual = 0;   ///< max_g ‖f(y_g) − f_N(y_g)‖
  double rms_residual = 0;   ///< sqrt(mean_g ‖f(y_g) − f_N(y_g)‖²)
  double jitter = 0;         ///< ridge added when the design matrix was rank deficient
};

/// Least-squares fit of a target in the span of the kernel sections on a
/// sample grid. Each output component is fitted independently.
Projection project_into_span(const CenterSet& centers,
                             const std::function<Vec(const Vec&)>& target,
                             const std::vector<Vec>& sample_grid,
                             const JitterPolicy& jitter = {});

}  // namespace rkhs
