#include <doctest.h>

#include "fixtures/oracle_fixtures.hpp"
#include "rkhs/errors.hpp"
#include "rkhs/linalg.hpp"

#include <cmath>
#include <random>

using namespace rkhs;

namespace {

Mat row_major(const double* data, int n) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(data, n, n);
}

Mat mat1(double v) { return Mat::Constant(1, 1, v); }

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("scalar and identity lyapunov solves") {
    CHECK(solve_lyapunov(mat1(-1.0), mat1(2.0))(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(solve_lyapunov(-Mat::Identity(2, 2), Mat::Identity(2, 2)).isApprox(0.5 * Mat::Identity(2, 2)));
  }

  TEST_CASE("lyapunov solve matches the scipy reference") {
    const Mat a = row_major(fixtures::kLyapA, 4);
    const Mat q = row_major(fixtures::kLyapQ, 4);
    const Mat p = solve_lyapunov(a, q);
    CHECK((p - row_major(fixtures::kLyapP, 4)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(lyapunov_residual(a, p, q) < 1e-10);
  }

  TEST_CASE("random stable systems have small residuals") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
      Mat a(4, 4), m(4, 4);
      for (auto* mat : {&a, &m})
        for (Eigen::Index i = 0; i < mat->size(); ++i) mat->data()[i] = n01(rng);
      const double shift = eigenvalues(a).real().maxCoeff() + 0.3;
      a -= shift * Mat::Identity(4, 4);
      const Mat q = m * m.transpose() + Mat::Identity(4, 4);
      const Mat p = solve_lyapunov(a, q);
      // Re-multiplied independently of the solver.
      const Mat check = a.transpose() * p + p * a + q;
      CHECK(check.cwiseAbs().maxCoeff() < 1e-9 * q.norm());
      CHECK(lambda_min(p) > 0.0);
    }
  }

  TEST_CASE("non-Hurwitz A is a design error naming the eigenvalue") {
    Mat a(2, 2);
    a << -1, 0, 0, 0.5;
    try {
      solve_lyapunov(a, Mat::Identity(2, 2));
      FAIL("expected DesignError");
    } catch (const DesignError& e) {
      CHECK(std::string(e.what()).find("0.5") != std::string::npos);
    }
  }

  TEST_CASE("scalar lure design") {
    const auto sol = design_lure(mat1(-1), mat1(1), mat1(1), 1.0, mat1(1));
    CHECK(sol.P(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sol.lyapunov_residual <= 1e-15);
    CHECK(sol.pb_ct_residual <= 1e-15);
    CHECK(sol.certified);
  }

  TEST_CASE("translational velocity block") {
    // A − LC restricted to the velocity states with L2 = l·I, mass 4.
    const double l = 100.0, eps = 1.0, mass = 4.0;
    const double w = 2.0 * std::sqrt(2.0 * l - eps);
    const auto sol = design_lure(-l * Mat::Identity(3, 3), Mat::Identity(3, 3) / mass, Mat::Identity(3, 3), eps,
                                 w * Mat::Identity(3, 3));
    CHECK(sol.P.isApprox(mass * Mat::Identity(3, 3), 1e-12));
    CHECK(sol.certified);
    CHECK(sol.lyapunov_residual <= 1e-8);
  }

  TEST_CASE("full translational error matrix is not Hurwitz") {
    Mat a = Mat::Zero(6, 6);
    a.topRightCorner(3, 3).setIdentity();
    Mat c = Mat::Zero(3, 6);
    c.rightCols(3).setIdentity();
    Mat l(6, 3);
    l << Mat::Identity(3, 3), 5 * Mat::Identity(3, 3);
    CHECK_FALSE(is_hurwitz(a - l * c));
  }

  TEST_CASE("rotational diagonal design pins W per axis") {
    const Vec inertia = (Vec(3) << 0.2, 15, 15).finished();
    const double l = 10.0, eps = 1.0;
    Mat w = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i) w(i, i) = std::sqrt((2 * l - eps) * inertia(i));
    const Mat b = inertia.cwiseInverse().asDiagonal();
    const auto sol = design_lure(-l * Mat::Identity(3, 3), b, Mat::Identity(3, 3), eps, w);
    CHECK(sol.P.isApprox(Mat(inertia.asDiagonal()), 1e-12));
    CHECK(sol.certified);

    // A uniform W breaks PB = Cᵀ: flagged, not thrown.
    const auto flagged = design_lure(-l * Mat::Identity(3, 3), b, Mat::Identity(3, 3), eps, 2.0 * Mat::Identity(3, 3));
    CHECK_FALSE(flagged.certified);
    CHECK(flagged.pb_ct_residual > 1e-3);
  }

  TEST_CASE("shift too large for the lure solve") {
    CHECK_THROWS_AS(design_lure(mat1(-1), mat1(1), mat1(1), 2.5, mat1(1)), DesignError);
  }

  TEST_CASE("lambda_min") {
    CHECK(lambda_min(Mat::Identity(3, 3)) == doctest::Approx(1.0));
    CHECK(lambda_min(Mat((Vec(3) << 0.2, 15, 15).finished().asDiagonal())) == doctest::Approx(0.2));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
      const double a = std::abs(u(rng)) + 2.5, c = std::abs(u(rng)) + 2.5, b = u(rng);
      Mat m(2, 2);
      m << a, b, b, c;
      // Smaller root of λ² − (a+c)λ + (ac − b²).
      const double tr = a + c, det = a * c - b * b;
      const double root = 0.5 * (tr - std::sqrt(tr * tr - 4 * det));
      CHECK(std::abs(lambda_min(m) - root) <= 1e-10);
    }
    Mat asym(2, 2);
    asym << 1, 0.1, 0, 1;
    CHECK_THROWS_AS(lambda_min(asym), InputDomainError);
  }

  TEST_CASE("spectral norm and pseudo-inverse") {
    Mat m(2, 2);
    m << 3, 0, 0, -4;
    CHECK(spectral_norm(m) == doctest::Approx(4.0));
    Mat b = Mat::Zero(6, 3);
    b.bottomRows(3) = Mat::Identity(3, 3) / 4.0;
    const Mat pinv = pseudo_inverse(b);
    CHECK((pinv * b).isApprox(Mat::Identity(3, 3)));
    CHECK(pinv.rightCols(3).isApprox(4.0 * Mat::Identity(3, 3)));
  }
}
