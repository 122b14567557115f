#include "rkhs/kernel.hpp"

#include "rkhs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rkhs {
namespace {

bool all_finite(const Vec& v) { return v.allFinite(); }

// σ(s) for ν = p + 1/2:  e^{−s} · p!/(2p)! · Σ_{i=0}^{p} (p+i)!/(i!(p−i)!) (2s)^{p−i}
double half_integer_matern(int p, double s) {
  double factorial_ratio = 1.0;  // p!/(2p)!
  for (int j = p + 1; j <= 2 * p; ++j) factorial_ratio /= j;
  double sum = 0.0;
  for (int i = 0; i <= p; ++i) {
    // (p+i)! / (i! (p−i)!)
    double coeff = 1.0;
    for (int j = 1; j <= p + i; ++j) coeff *= j;
    for (int j = 1; j <= i; ++j) coeff /= j;
    for (int j = 1; j <= p - i; ++j) coeff /= j;
    sum += coeff * std::pow(2.0 * s, p - i);
  }
  return std::exp(-s) * factorial_ratio * sum;
}

}  // namespace

KernelModel KernelModel::sobolev_matern(int order, int dimension, double length_scale,
                                        int output_dim) {
  if (order <= 0 || dimension <= 0)
    throw InputDomainError("Matérn order and dimension must be positive integers");
  if (2 * order <= dimension)
    throw InputDomainError("Matérn kernel requires order k > d/2");
  if (!(length_scale > 0.0) || !std::isfinite(length_scale))
    throw InputDomainError("kernel length scale must be positive and finite");
  if (output_dim <= 0) throw InputDomainError("kernel output dimension must be positive");
  KernelModel k;
  k.family_ = KernelFamily::SobolevMatern;
  k.order_ = order;
  k.dimension_ = dimension;
  k.length_scale_ = length_scale;
  k.output_dim_ = output_dim;
  k.nu_ = order - 0.5 * dimension;
  return k;
}

KernelModel KernelModel::gaussian(double length_scale, int output_dim) {
  if (!(length_scale > 0.0) || !std::isfinite(length_scale))
    throw InputDomainError("kernel length scale must be positive and finite");
  if (output_dim <= 0) throw InputDomainError("kernel output dimension must be positive");
  KernelModel k;
  k.family_ = KernelFamily::Gaussian;
  k.length_scale_ = length_scale;
  k.output_dim_ = output_dim;
  return k;
}

double KernelModel::radial(double r) const {
  if (!std::isfinite(r) || r < 0.0) throw InputDomainError("kernel radius must be finite and >= 0");
  const double s = r / length_scale_;
  if (family_ == KernelFamily::Gaussian) return std::exp(-0.5 * s * s);
  if (s == 0.0) return 1.0;
  // dimension odd <=> ν half-integer
  if (dimension_ % 2 == 1) return half_integer_matern(order_ - (dimension_ + 1) / 2, s);
  if (s > 700.0) return 0.0;
  return std::pow(2.0, 1.0 - nu_) / std::tgamma(nu_) * std::pow(s, nu_) *
         std::cyl_bessel_k(nu_, s);
}

double KernelModel::operator()(const Vec& y1, const Vec& y2) const {
  if (y1.size() != y2.size()) throw UsageError("kernel arguments differ in dimension");
  if (!all_finite(y1) || !all_finite(y2)) throw InputDomainError("non-finite kernel argument");
  return radial((y1 - y2).norm());
}

CenterSet CenterSet::assemble(const KernelModel& model, std::vector<Vec> centers,
                              const JitterPolicy& jitter) {
  if (centers.empty()) throw DesignError("center set must contain at least one center");
  const auto dim = centers.front().size();
  for (const auto& c : centers) {
    if (c.size() != dim) throw UsageError("centers differ in dimension");
    if (!all_finite(c)) throw InputDomainError("non-finite center");
  }
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if (centers[i] == centers[j]) {
        std::ostringstream msg;
        msg << "duplicate centers at positions " << i << " and " << j;
        throw DesignError(msg.str());
      }

  CenterSet set(model);
  set.centers_ = std::move(centers);
  const auto n = static_cast<Eigen::Index>(set.centers_.size());
  set.gram_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    set.gram_(i, i) = model(set.centers_[i], set.centers_[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = model(set.centers_[i], set.centers_[j]);
      set.gram_(i, j) = v;
      set.gram_(j, i) = v;
    }
  }

  auto try_factor = [&](double lambda) {
    Mat shifted = set.gram_;
    shifted.diagonal().array() += lambda;
    Eigen::LLT<Mat> llt(shifted);
    if (llt.info() != Eigen::Success) return false;
    Mat l = llt.matrixL();
    if (!(l.diagonal().array() > 0.0).all() || !l.allFinite()) return false;
    set.factor_ = std::move(l);
    set.jitter_ = lambda;
    return true;
  };

  if (try_factor(0.0)) return set;
  for (double lambda = jitter.initial; lambda <= jitter.max * (1.0 + 1e-12);
       lambda *= jitter.growth)
    if (try_factor(lambda)) return set;

  Eigen::SelfAdjointEigenSolver<Mat> eig(set.gram_, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  std::ostringstream msg;
  msg << "Grammian not positive definite after jitter " << jitter.max
      << "; smallest eigenvalue estimate " << lmin;
  throw IllConditionedCentersError(msg.str(), lmin);
}

CenterSet CenterSet::empty(const KernelModel& model) {
  CenterSet set(model);
  set.gram_.resize(0, 0);
  set.factor_.resize(0, 0);
  return set;
}

Mat CenterSet::grammian() const {
  const int m = output_dim();
  const auto n = static_cast<Eigen::Index>(size());
  Mat full = Mat::Zero(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      full.block(i * m, j * m, m, m).diagonal().setConstant(gram_(i, j));
  return full;
}

Vec CenterSet::kernel_row(const Vec& y) const {
  Vec k(static_cast<Eigen::Index>(size()));
  for (std::size_t j = 0; j < size(); ++j) k(static_cast<Eigen::Index>(j)) = model_(y, centers_[j]);
  return k;
}

Mat CenterSet::kernel_matrix(const Vec& y) const {
  const int m = output_dim();
  const Vec k = kernel_row(y);
  Mat out = Mat::Zero(m, coeff_dim());
  for (Eigen::Index j = 0; j < k.size(); ++j) out.block(0, j * m, m, m).diagonal().setConstant(k(j));
  return out;
}

Vec CenterSet::solve(const Vec& v) const {
  if (v.size() != coeff_dim()) throw UsageError("Grammian solve: vector length is not m·N");
  const int m = output_dim();
  const auto n = static_cast<Eigen::Index>(size());
  // 𝕂 = G ⊗ I_m: with V the m×N matrix whose columns are the blocks, 𝕂⁻¹v ↔ V G⁻¹.
  Eigen::Map<const Mat> blocks(v.data(), m, n);
  Mat rhs = blocks.transpose();
  factor_.triangularView<Eigen::Lower>().solveInPlace(rhs);
  factor_.transpose().triangularView<Eigen::Upper>().solveInPlace(rhs);
  Mat sol = rhs.transpose();
  return Eigen::Map<const Vec>(sol.data(), sol.size());
}

Vec CenterSet::multiply(const Vec& v) const {
  if (v.size() != coeff_dim()) throw UsageError("Grammian product: vector length is not m·N");
  const int m = output_dim();
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::Map<const Mat> blocks(v.data(), m, n);
  Mat prod = blocks * gram_;
  return Eigen::Map<const Vec>(prod.data(), prod.size());
}

std::pair<double, double> CenterSet::eigenvalue_range() const {
  if (size() == 0) return {0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram_, Eigen::EigenvaluesOnly);
  return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

RkhsElement::RkhsElement(std::shared_ptr<const CenterSet> centers, Vec coeffs)
    : centers_(std::move(centers)), coeffs_(std::move(coeffs)) {
  if (!centers_) throw UsageError("RKHS element needs a center set");
  if (coeffs_.size() != centers_->coeff_dim())
    throw UsageError("RKHS element: coefficient length is not m·N");
}

Vec RkhsElement::operator()(const Vec& y) const { return evaluate_element(*centers_, coeffs_, y); }

double RkhsElement::native_norm_squared() const { return coeffs_.dot(centers_->multiply(coeffs_)); }

Vec evaluate_element(const CenterSet& centers, const Vec& alpha, const Vec& y) {
  if (alpha.size() != centers.coeff_dim())
    throw UsageError("evaluate_element: coefficient length is not m·N");
  const int m = centers.output_dim();
  if (y.size() != m) throw UsageError("evaluate_element: query point dimension is not m");
  Eigen::Map<const Mat> blocks(alpha.data(), m, static_cast<Eigen::Index>(centers.size()));
  return blocks * centers.kernel_row(y);
}

std::vector<Vec> lattice(const Box& box, int points_per_axis) {
  if (box.lower.size() != box.upper.size()) throw UsageError("box bounds differ in dimension");
  if (points_per_axis < 1) throw UsageError("lattice needs at least one point per axis");
  if ((box.upper.array() < box.lower.array()).any()) throw UsageError("box upper bound below lower");
  const auto dim = box.lower.size();
  std::vector<Vec> axes(static_cast<std::size_t>(dim));
  for (Eigen::Index a = 0; a < dim; ++a) {
    Vec ax(points_per_axis);
    if (points_per_axis == 1) {
      ax(0) = 0.5 * (box.lower(a) + box.upper(a));
    } else {
      for (int i = 0; i < points_per_axis; ++i)
        ax(i) = box.lower(a) + (box.upper(a) - box.lower(a)) * i / (points_per_axis - 1);
    }
    axes[static_cast<std::size_t>(a)] = ax;
  }
  std::size_t total = 1;
  for (Eigen::Index a = 0; a < dim; ++a) total *= static_cast<std::size_t>(points_per_axis);
  std::vector<Vec> points;
  points.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t p = 0; p < total; ++p) {
    Vec pt(dim);
    for (Eigen::Index a = 0; a < dim; ++a) pt(a) = axes[static_cast<std::size_t>(a)](idx[static_cast<std::size_t>(a)]);
    points.push_back(std::move(pt));
    for (auto a = static_cast<int>(dim) - 1; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < points_per_axis) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
  return points;
}

double power_function(const CenterSet& centers, const Vec& y) {
  const double kyy = centers.kernel()(y, y);
  if (centers.size() == 0) return std::sqrt(kyy);
  // 𝒦(y,y) − 𝒦_Ξ(y)𝕂⁻¹𝒦_Ξ(y)ᵀ = (𝔎(y,y) − kᵀG⁻¹k)·I_m, so every diagonal entry agrees.
  Vec v = centers.kernel_row(y);
  centers.scalar_factor().triangularView<Eigen::Lower>().solveInPlace(v);
  return std::sqrt(std::abs(kyy - v.squaredNorm()));
}

SupPowerResult sup_power_function(const CenterSet& centers, const Box& probe,
                                  int points_per_axis) {
  if (points_per_axis < 2) throw UsageError("sup_power_function needs at least 2 points per axis");
  SupPowerResult out;
  out.points_per_axis = points_per_axis;
  out.spacing = (probe.upper - probe.lower) / (points_per_axis - 1);
  out.value = -1.0;
  for (const auto& y : lattice(probe, points_per_axis)) {
    const double p = power_function(centers, y);
    if (p > out.value) {
      out.value = p;
      out.argmax = y;
    }
  }
  return out;
}

Projection project_into_span(const CenterSet& centers,
                             const std::function<Vec(const Vec&)>& target,
                             const std::vector<Vec>& sample_grid, const JitterPolicy& jitter) {
  if (sample_grid.empty()) throw UsageError("project_into_span: empty sample grid");
  if (centers.size() == 0) throw UsageError("project_into_span: empty center set");
  const int m = centers.output_dim();
  const auto g = static_cast<Eigen::Index>(sample_grid.size());
  const auto n = static_cast<Eigen::Index>(centers.size());

  Mat phi(g, n);
  Mat values(g, m);
  for (Eigen::Index i = 0; i < g; ++i) {
    const auto& y = sample_grid[static_cast<std::size_t>(i)];
    phi.row(i) = centers.kernel_row(y).transpose();
    const Vec f = target(y);
    if (f.size() != m) throw UsageError("project_into_span: target output dimension is not m");
    values.row(i) = f.transpose();
  }

  Projection out;
  Mat coeff_by_center;  // N×m
  Eigen::ColPivHouseholderQR<Mat> qr(phi);
  if (qr.rank() == n) {
    coeff_by_center = qr.solve(values);
  } else {
    // Ridge through the augmented system [Φ; √λ I].
    out.jitter = jitter.initial;
    Mat aug(g + n, n);
    aug << phi, std::sqrt(out.jitter) * Mat::Identity(n, n);
    Mat rhs(g + n, m);
    rhs << values, Mat::Zero(n, m);
    coeff_by_center = aug.colPivHouseholderQr().solve(rhs);
  }

  Mat transposed = coeff_by_center.transpose();  // m×N, column j = α_j
  out.coeffs = Eigen::Map<const Vec>(transposed.data(), transposed.size());

  const Mat residual = values - phi * coeff_by_center;
  const Vec row_norms = residual.rowwise().norm();
  out.max_residual = row_norms.maxCoeff();
  out.rms_residual = std::sqrt(row_norms.squaredNorm() / static_cast<double>(g));
  return out;
}

}  // namespace rkhs
