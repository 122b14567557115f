#include <doctest.h>

#include "rkhs/dynamics.hpp"
#include "rkhs/errors.hpp"
#include "rkhs/linalg.hpp"

#include <cmath>
#include <numbers>

using namespace rkhs;

namespace {

PlantModel translational_plant() {
  PlantModel p;
  p.family = PlantFamily::RigidTranslational;
  p.A = translational_A();
  p.B = translational_B(4.0);
  p.C = translational_C();
  p.f_true = [](const Vec&) { return Vec(Vec::Zero(3)); };
  p.xi = [](double) { return Vec(Vec::Zero(6)); };
  p.delta = [](double) { return Vec(Vec::Zero(3)); };
  return p;
}

PlantModel rotational_plant() {
  PlantModel p;
  p.family = PlantFamily::RigidRotational;
  p.inertia = Vec3(0.2, 15, 15).asDiagonal().toDenseMatrix();
  p.A = Mat::Zero(3, 3);
  p.B = Mat(p.inertia->inverse());
  p.C = Mat::Identity(3, 3);
  p.f_true = [](const Vec& y) { return rotational_drag(y); };
  p.xi = [](double) { return Vec(Vec::Zero(3)); };
  p.delta = [](double) { return Vec(Vec::Zero(3)); };
  return p;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("linear dynamics without uncertainty") {
    const auto p = translational_plant();
    Vec x(6);
    x << 1, 2, 3, 4, 5, 6;
    const Vec u = Vec3(1, -1, 2);
    CHECK(plant_rhs(p, x, u, 0.3).isApprox(p.A * x + p.B * u));
  }

  TEST_CASE("zero state and input leave only the uncertainty terms") {
    auto p = translational_plant();
    p.f_true = [](const Vec& y) { return translational_force(y); };
    p.xi = [](double t) { return Vec(Vec::Constant(6, t)); };
    const Vec dx = plant_rhs(p, Vec::Zero(6), Vec::Zero(3), 0.5);
    CHECK(dx.isApprox(p.B * translational_force(Vec::Zero(3)) + Vec::Constant(6, 0.5)));
  }

  TEST_CASE("euler kinematics") {
    CHECK(euler_kinematics_matrix(Vec3::Zero()).isApprox(Mat3::Identity()));
    Mat3 expected;
    expected << 1, 0, 0, 0, 0, -1, 0, 1, 0;
    CHECK(euler_kinematics_matrix(Vec3(std::numbers::pi / 2, 0, 0)).isApprox(expected, 1e-15));
    CHECK_THROWS_AS(euler_kinematics_matrix(Vec3(0, std::numbers::pi / 2 - 1e-4, 0)), SimulationAbort);
  }

  TEST_CASE("torque-free principal spin") {
    auto p = rotational_plant();
    p.f_true = [](const Vec&) { return Vec(Vec::Zero(3)); };
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 w = Vec3::Zero();
      w(axis) = 0.7;
      const auto d = rotational_rhs(p, Vec3::Zero(), w, Vec3::Zero(), 0.0);
      CHECK(d.omega_dot.norm() == 0.0);
      CHECK(d.eta_dot.isApprox(w));
    }
  }

  TEST_CASE("gyroscopic term") {
    auto p = rotational_plant();
    p.f_true = [](const Vec&) { return Vec(Vec::Zero(3)); };
    const Vec3 w(0.1, 0.2, 0.3);
    const Mat3 inertia = *p.inertia;
    const Vec3 expected = -inertia.inverse() * skew(w) * inertia * w;
    CHECK(plant_rhs(p, w, Vec3::Zero(), 0.0).isApprox(expected));
  }

  TEST_CASE("controllers at zero tracking error") {
    const Mat b_pinv = pseudo_inverse(translational_B(4.0));
    Mat gain(3, 6);
    gain << Mat::Identity(3, 3), Mat::Identity(3, 3);
    for (double t : {0.0, 0.7, 3.1}) {
      const auto r = translational_reference(t);
      CHECK(translational_controller(t, r.value, gain, b_pinv).isApprox(b_pinv * r.rate));
      const auto w = rotational_reference(t);
      CHECK(rotational_controller(t, w.value, 10 * Mat::Identity(3, 3)).isApprox(w.rate));
    }
  }

  TEST_CASE("reference rates are derivatives") {
    const double h = 1e-6;
    for (double t : {0.3, 2.0, 11.0}) {
      const Vec fd = (translational_reference(t + h).value - translational_reference(t - h).value) / (2 * h);
      CHECK((fd - translational_reference(t).rate).cwiseAbs().maxCoeff() < 1e-8);
      const Vec fw = (rotational_reference(t + h).value - rotational_reference(t - h).value) / (2 * h);
      CHECK((fw - rotational_reference(t).rate).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  TEST_CASE("disturbances") {
    CHECK(translational_disturbance()(0.0).isApprox(Vec::Constant(3, 0.008)));
    CHECK(rotational_disturbance()(0.0).norm() == 0.0);
    CHECK(translational_disturbance().norm_bound() == doctest::Approx(0.008 * std::sqrt(6.0)));
    CHECK(rotational_disturbance().norm_bound() == doctest::Approx(0.05 * std::sqrt(3.0)));
    CHECK(translational_disturbance(0.0)(1.3).norm() == 0.0);
    for (double t = 0; t < 20; t += 0.37) CHECK(translational_disturbance()(t).norm() <= 0.008 * std::sqrt(6.0));
  }

  TEST_CASE("signal terms on one channel") {
    const SignalSum s(2, {{SignalTerm::Shape::Tanh, 1, 2.0, 1.0, 0.0}});
    CHECK(s(0.5)(0) == 0.0);
    CHECK(s(0.5)(1) == doctest::Approx(2 * std::tanh(0.5)));
    CHECK_THROWS_AS(SignalSum(2, {{SignalTerm::Shape::Sin, 2, 1.0, 1.0, 0.0}}), UsageError);
  }

  TEST_CASE("uncertainty models") {
    const Vec y = Vec3(0.5, -1.0, 2.0);
    const Vec f = translational_force(y);
    CHECK(f(0) == doctest::Approx(std::cos(0.25)));
    CHECK(f(1) == doctest::Approx(std::sin(1.0) + std::sin(0.5)));
    CHECK(f(2) == doctest::Approx(std::cos(2.0) + std::sin(-1.0)));
    CHECK(rotational_drag(y).isApprox(-0.001 * y.norm() * y));
  }

  TEST_CASE("attitude wrapping") {
    const Vec3 w = wrap_attitude(Vec3(-0.5, 0.3, 7.0));
    CHECK(w(0) == doctest::Approx(2 * std::numbers::pi - 0.5));
    CHECK(w(1) == 0.3);
    CHECK(w(2) == doctest::Approx(7.0 - 2 * std::numbers::pi));
  }
}
