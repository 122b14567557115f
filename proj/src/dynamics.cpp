#include "rkhs/dynamics.hpp"

#include "rkhs/errors.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <sstream>

namespace rkhs {

SignalSum::SignalSum(int channels, std::vector<SignalTerm> terms, double scale)
    : channels_(channels), terms_(std::move(terms)), scale_(scale) {
  if (channels_ <= 0) throw UsageError("signal needs at least one channel");
  for (const auto& term : terms_) {
    if (term.channel >= channels_) throw UsageError("signal term channel out of range");
    if (!std::isfinite(term.amplitude) || !std::isfinite(term.frequency) || !std::isfinite(term.phase))
      throw InputDomainError("non-finite signal term");
  }
}

Vec SignalSum::operator()(double t) const {
  Vec out = Vec::Zero(channels_);
  for (const auto& term : terms_) {
    const double arg = term.frequency * t + term.phase;
    double v = 0.0;
    switch (term.shape) {
      case SignalTerm::Shape::Sin: v = std::sin(arg); break;
      case SignalTerm::Shape::Cos: v = std::cos(arg); break;
      case SignalTerm::Shape::Tanh: v = std::tanh(arg); break;
    }
    v *= scale_ * term.amplitude;
    if (term.channel < 0)
      out.array() += v;
    else
      out(term.channel) += v;
  }
  return out;
}

double SignalSum::norm_bound() const {
  // Sinusoids of equal frequency on a channel combine as phasors; everything
  // else is bounded term by term.
  Vec per_channel = Vec::Zero(channels_);
  for (int c = 0; c < channels_; ++c) {
    std::map<double, std::complex<double>> phasors;
    for (const auto& term : terms_) {
      if (term.channel >= 0 && term.channel != c) continue;
      const double a = scale_ * term.amplitude;
      switch (term.shape) {
        case SignalTerm::Shape::Sin: phasors[term.frequency] += std::polar(a, term.phase); break;
        case SignalTerm::Shape::Cos:
          phasors[term.frequency] += std::polar(a, term.phase + std::numbers::pi / 2);
          break;
        case SignalTerm::Shape::Tanh: per_channel(c) += std::abs(a); break;
      }
    }
    for (const auto& [freq, z] : phasors) per_channel(c) += std::abs(z);
  }
  return per_channel.norm();
}

Vec plant_rhs(const PlantModel& p, const Vec& x, const Vec& u, double t) {
  if (x.size() != p.state_dim() || u.size() != p.B.cols())
    throw UsageError("plant_rhs: state or input dimension mismatch");
  const Vec y = p.output(x, t);
  Vec dx = p.A * x + p.B * (u + p.f_true(y)) + p.xi(t);
  if (p.family == PlantFamily::RigidRotational) {
    const Mat3& inertia = *p.inertia;
    const Vec3 omega = x.head<3>();
    dx -= inertia.ldlt().solve(omega.cross(inertia * omega));
  }
  return dx;
}

Mat3 euler_kinematics_matrix(const Vec3& eta) {
  const double phi = eta(0);
  const double theta = eta(1);
  if (!eta.allFinite()) throw SimulationAbort("non-finite Euler angles");
  if (std::abs(theta) >= std::numbers::pi / 2 - 1e-3) {
    std::ostringstream msg;
    msg << "3-2-1 Euler kinematics near singularity: eta = [" << eta.transpose() << "]";
    throw SimulationAbort(msg.str());
  }
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double tt = std::tan(theta), ct = std::cos(theta);
  Mat3 j;
  j << 1.0, sp * tt, cp * tt,
       0.0, cp, -sp,
       0.0, sp / ct, cp / ct;
  return j;
}

RotationalDerivative rotational_rhs(const PlantModel& p, const Vec3& eta, const Vec3& omega,
                                    const Vec3& u, double t) {
  if (p.family != PlantFamily::RigidRotational) throw UsageError("rotational_rhs: not a rotational plant");
  RotationalDerivative d;
  d.eta_dot = euler_kinematics_matrix(eta) * omega;
  d.omega_dot = plant_rhs(p, omega, u, t);
  return d;
}

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v(2), v(1),
       v(2), 0.0, -v(0),
       -v(1), v(0), 0.0;
  return s;
}

Vec3 wrap_attitude(const Vec3& eta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Vec3 out = eta;
  for (int i : {0, 2}) {
    out(i) = std::fmod(eta(i), two_pi);
    if (out(i) < 0.0) out(i) += two_pi;
  }
  return out;
}

Vec translational_force(const Vec& y) {
  if (y.size() != 3) throw UsageError("translational force expects a 3-vector");
  Vec f(3);
  f << std::cos(y(0) * y(0)), std::sin(y(1) * y(1)) + std::sin(y(0)), std::cos(y(2)) + std::sin(y(1));
  return f;
}

Vec rotational_drag(const Vec& y, double coeff) { return -coeff * y.norm() * y; }

Reference translational_reference(double t) {
  Reference r;
  r.value.resize(6);
  r.rate.resize(6);
  r.value << std::sin(t), std::cos(t), std::sin(2 * t), std::cos(t), -std::sin(t), 2 * std::cos(2 * t);
  r.rate << std::cos(t), -std::sin(t), 2 * std::cos(2 * t), -std::sin(t), -std::cos(t), -4 * std::sin(2 * t);
  return r;
}

Reference rotational_reference(double t) {
  Reference r;
  r.value.resize(3);
  r.rate.resize(3);
  const double th = std::tanh(0.1 * t);
  r.value << 0.1 * std::cos(0.1 * t), 0.1 * std::sin(0.1 * t), 0.1 * th;
  r.rate << -0.01 * std::sin(0.1 * t), 0.01 * std::cos(0.1 * t), 0.01 * (1.0 - th * th);
  return r;
}

Vec translational_controller(double t, const Vec& x, const Mat& gain, const Mat& b_pinv) {
  const Reference r = translational_reference(t);
  return -gain * (x - r.value) + b_pinv * r.rate;
}

Vec rotational_controller(double t, const Vec& omega, const Mat& gain) {
  const Reference r = rotational_reference(t);
  return -gain * (omega - r.value) + r.rate;
}

SignalSum translational_disturbance(double scale) {
  return SignalSum(3,
                   {{SignalTerm::Shape::Sin, -1, 0.008, 0.5, 0.0},
                    {SignalTerm::Shape::Cos, -1, 0.008, 0.5, 0.0}},
                   scale);
}

SignalSum rotational_disturbance(double scale) {
  return SignalSum(3, {{SignalTerm::Shape::Sin, -1, 0.05, 5.0, 0.0}}, scale);
}

Mat translational_A() {
  Mat a = Mat::Zero(6, 6);
  a.topRightCorner(3, 3).setIdentity();
  return a;
}

Mat translational_B(double mass) {
  if (!(mass > 0.0)) throw InputDomainError("mass must be positive");
  Mat b = Mat::Zero(6, 3);
  b.bottomRows(3) = Mat::Identity(3, 3) / mass;
  return b;
}

Mat translational_C() {
  Mat c = Mat::Zero(3, 6);
  c.rightCols(3).setIdentity();
  return c;
}

}  // namespace rkhs
