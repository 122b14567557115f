#include "rkhs/linalg.hpp"

#include "rkhs/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rkhs {
namespace {

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw InputDomainError(std::string(what) + ": non-finite entry");
}

void require_square(const Mat& m, const char* what) {
  if (m.rows() != m.cols()) throw UsageError(std::string(what) + ": matrix is not square");
}

}  // namespace

Eigen::VectorXcd eigenvalues(const Mat& a) {
  require_square(a, "eigenvalues");
  require_finite(a, "eigenvalues");
  if (a.size() == 0) return {};
  Eigen::EigenSolver<Mat> es(a, false);
  return es.eigenvalues();
}

bool is_hurwitz(const Mat& a) { return (eigenvalues(a).real().array() < 0.0).all(); }

Mat solve_lyapunov(const Mat& a, const Mat& q) {
  require_square(a, "solve_lyapunov");
  require_square(q, "solve_lyapunov");
  if (a.rows() != q.rows()) throw UsageError("solve_lyapunov: A and Q differ in size");
  require_finite(q, "solve_lyapunov");
  if (max_abs(q - q.transpose()) > 1e-10 * std::max(1.0, max_abs(q)))
    throw InputDomainError("solve_lyapunov: Q is not symmetric");

  const Eigen::VectorXcd eig = eigenvalues(a);
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (eig(i).real() >= 0.0) {
      std::ostringstream msg;
      msg << "matrix is not Hurwitz: eigenvalue " << eig(i).real() << (eig(i).imag() < 0 ? "" : "+")
          << eig(i).imag() << "i has nonnegative real part";
      throw DesignError(msg.str());
    }
  }

  // vec(AᵀP + PA) = (I ⊗ Aᵀ + Aᵀ ⊗ I) vec(P)
  const Eigen::Index n = a.rows();
  const Mat at = a.transpose();
  Mat kron = Mat::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kron.block(i * n, i * n, n, n) += at;
    for (Eigen::Index j = 0; j < n; ++j)
      kron.block(i * n, j * n, n, n).diagonal().array() += at(i, j);
  }
  const Mat rhs = -q;
  const Vec p_vec = kron.fullPivLu().solve(Eigen::Map<const Vec>(rhs.data(), rhs.size()));
  Mat p = Eigen::Map<const Mat>(p_vec.data(), n, n);
  return 0.5 * (p + p.transpose());
}

double lyapunov_residual(const Mat& a, const Mat& p, const Mat& q) {
  return max_abs(a.transpose() * p + p * a + q);
}

LureSolution design_lure(const Mat& a_e, const Mat& b, const Mat& c, double epsilon, const Mat& w,
                         double spr_tolerance) {
  require_square(a_e, "design_lure");
  const Eigen::Index n = a_e.rows();
  if (b.rows() != n || c.cols() != n || c.rows() != b.cols() || w.cols() != n)
    throw UsageError("design_lure: inconsistent dimensions of A_e, B, C, W");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InputDomainError("design_lure: epsilon must be positive");
  if (!is_hurwitz(a_e)) {
    // Let solve_lyapunov name the eigenvalue.
    solve_lyapunov(a_e, Mat::Identity(n, n));
  }

  const Mat shifted = a_e + 0.5 * epsilon * Mat::Identity(n, n);
  const Mat wtw = w.transpose() * w;
  Mat p;
  try {
    p = solve_lyapunov(shifted, wtw);
  } catch (const DesignError& e) {
    throw DesignError(std::string("design_lure: A_e + (ε/2)I is not Hurwitz; reduce ε (") + e.what() +
                      ")");
  }
  if (!(lambda_min(p) > 0.0))
    throw DesignError("design_lure: P is not positive definite; (W, A_e) must be observable");

  LureSolution sol;
  sol.P = p;
  sol.W = w;
  sol.epsilon = epsilon;
  sol.lyapunov_residual = max_abs(a_e.transpose() * p + p * a_e + wtw + epsilon * p);
  sol.pb_ct_residual = max_abs(p * b - c.transpose());
  sol.certified = sol.pb_ct_residual <= spr_tolerance;
  return sol;
}

double lambda_min(const Mat& m) {
  require_square(m, "lambda_min");
  require_finite(m, "lambda_min");
  if (m.size() == 0) throw UsageError("lambda_min: empty matrix");
  if (max_abs(m - m.transpose()) > 1e-10) throw InputDomainError("lambda_min: matrix is not symmetric");
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double spectral_norm(const Mat& m) {
  require_finite(m, "spectral_norm");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat pseudo_inverse(const Mat& b) {
  require_finite(b, "pseudo_inverse");
  if (b.size() == 0) return Mat(b.cols(), b.rows());
  Eigen::JacobiSVD<Mat> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double tol = std::numeric_limits<double>::epsilon() * std::max(b.rows(), b.cols()) * s(0);
  Vec inv = s;
  for (Eigen::Index i = 0; i < s.size(); ++i) inv(i) = s(i) > tol ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace rkhs
