#pragma once

#include "rkhs/kernel.hpp"

#include <complex>

namespace rkhs {

Eigen::VectorXcd eigenvalues(const Mat& a);

/// All eigenvalues strictly in the open left half-plane.
bool is_hurwitz(const Mat& a);

/// Solves AᵀP + PA = −Q for symmetric P by Kronecker vectorization.
/// A must be Hurwitz; Q must be symmetric. Throws DesignError naming the
/// offending eigenvalue otherwise.
Mat solve_lyapunov(const Mat& a, const Mat& q);

/// ‖AᵀP + PA + Q‖_max, recomputed from the matrices.
double lyapunov_residual(const Mat& a, const Mat& p, const Mat& q);

/// Solution of the Lur'e equations
///   A_eᵀP + P A_e = −WᵀW − εP,   PB = Cᵀ.
/// The first equation is solved exactly; the second is checked.
struct LureSolution {
  Mat P;
  Mat W;
  double epsilon = 0.0;
  double lyapunov_residual = 0.0;  ///< ‖A_eᵀP + P A_e + WᵀW + εP‖_max
  double pb_ct_residual = 0.0;     ///< ‖PB − Cᵀ‖_max
  bool certified = false;          ///< pb_ct_residual within tolerance
};

LureSolution design_lure(const Mat& a_e, const Mat& b, const Mat& c, double epsilon,
                         const Mat& w, double spr_tolerance = 1e-6);

/// Smallest eigenvalue of a symmetric matrix. Inputs whose asymmetry exceeds
/// 1e-10 are rejected; the rest are symmetrized first.
double lambda_min(const Mat& m);

double spectral_norm(const Mat& m);

/// Moore-Penrose pseudo-inverse via SVD.
Mat pseudo_inverse(const Mat& b);

/// Entrywise max |·|.
inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace rkhs
