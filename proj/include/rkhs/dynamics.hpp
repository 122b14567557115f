#pragma once

#include "rkhs/kernel.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rkhs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

using TimeSignal = std::function<Vec(double)>;
using OutputFunction = std::function<Vec(const Vec&)>;
/// u = controller(t, x)
using Controller = std::function<Vec(double, const Vec&)>;

/// One term of a time signal: amplitude·shape(frequency·t + phase), applied to
/// one channel or, with channel < 0, to every channel.
struct SignalTerm {
  enum class Shape { Sin, Cos, Tanh };
  Shape shape = Shape::Sin;
  int channel = -1;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

/// Sum of sinusoid/tanh terms over a fixed number of channels.
class SignalSum {
 public:
  SignalSum(int channels, std::vector<SignalTerm> terms, double scale = 1.0);

  Vec operator()(double t) const;
  /// Per-channel amplitude bound (equal-frequency sinusoids summed as phasors),
  /// combined into a Euclidean-norm bound.
  double norm_bound() const;
  int channels() const noexcept { return channels_; }
  const std::vector<SignalTerm>& terms() const noexcept { return terms_; }

 private:
  int channels_;
  std::vector<SignalTerm> terms_;
  double scale_;
};

enum class PlantFamily { GenericLinear, RigidTranslational, RigidRotational };

/// ẋ = Ax + B(u + f(y)) + ξ(t),  y = Cx + δ(t).
/// For the rotational rigid body x = ω, A = 0, B = I⁻¹, C = I₃ and the
/// gyroscopic term −I⁻¹(ω × Iω) is added.
struct PlantModel {
  PlantFamily family = PlantFamily::GenericLinear;
  Mat A, B, C;
  OutputFunction f_true;
  TimeSignal xi;
  TimeSignal delta;
  double delta_bar = 0.0;
  std::optional<Mat3> inertia;  ///< set for RigidRotational

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index output_dim() const { return C.rows(); }

  Vec output(const Vec& x, double t) const { return C * x + delta(t); }
};

Vec plant_rhs(const PlantModel& p, const Vec& x, const Vec& u, double t);

/// 3-2-1 body-rate to Euler-rate map J(η), η = (φ, θ, ψ).
/// Throws SimulationAbort when |θ| ≥ π/2 − 1e-3.
Mat3 euler_kinematics_matrix(const Vec3& eta);

struct RotationalDerivative {
  Vec3 eta_dot;
  Vec3 omega_dot;
};

RotationalDerivative rotational_rhs(const PlantModel& p, const Vec3& eta, const Vec3& omega,
                                    const Vec3& u, double t);

/// Cross-product matrix v× with (v×)w = v × w.
Mat3 skew(const Vec3& v);

/// Wraps η into [0,2π) × (−π/2,π/2) × [0,2π) for reporting.
Vec3 wrap_attitude(const Vec3& eta);

// Built-in signals of the rigid-body examples.

/// f(y) = [cos(y₁²), sin(y₂²) + sin(y₁), cos(y₃) + sin(y₂)]ᵀ
Vec translational_force(const Vec& y);
/// f(y) = −c‖y‖y
Vec rotational_drag(const Vec& y, double coeff = 0.001);

struct Reference {
  Vec value;
  Vec rate;
};

/// x_r = [sin t, cos t, sin 2t, cos t, −sin t, 2cos 2t]ᵀ and its derivative.
Reference translational_reference(double t);
/// ω_r = [0.1cos 0.1t, 0.1sin 0.1t, 0.1tanh 0.1t]ᵀ and its derivative.
Reference rotational_reference(double t);

/// u = −K(x − x_r) + B†ẋ_r.
Vec translational_controller(double t, const Vec& x, const Mat& gain, const Mat& b_pinv);
/// u = −K(ω − ω_r) + ω̇_r.
Vec rotational_controller(double t, const Vec& omega, const Mat& gain);

/// 0.008(sin 0.5t + cos 0.5t) broadcast to three channels.
SignalSum translational_disturbance(double scale = 1.0);
/// 0.05 sin 5t broadcast to three channels.
SignalSum rotational_disturbance(double scale = 1.0);

Mat translational_A();
Mat translational_B(double mass);
Mat translational_C();

}  // namespace rkhs
