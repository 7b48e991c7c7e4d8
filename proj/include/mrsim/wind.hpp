#pragma once

#include <cstdint>

#include "mrsim/rng.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// Synthetic acceleration-disturbance field acting on the vehicle. All
/// variants are smooth functions of position, velocity and heading so that
/// they admit the first and second time derivatives the controllers may
/// learn. `offset` is an extra uniform term the scenario runner uses to
/// superimpose band-limited turbulence.
struct WindField {
  enum class Type { none, uniform_gust, position_jet, yaw_plate };

  Type type = Type::none;
  Vec3 peak = Vec3::Zero();      // m/s^2, field value at the bump center
  Vec3 center = Vec3::Zero();    // m, bump location (position_jet / yaw_plate)
  Vec3 width = Vec3::Ones();     // m, per-axis Gaussian width, > 0
  double drag = 0.0;             // 1/s, velocity-proportional drag coefficient
  double psi0 = 0.0;             // rad, heading of maximum plate exposure
  double f_max = 50.0;           // m/s^2, safety bound on the output norm
  Vec3 offset = Vec3::Zero();    // m/s^2, additive uniform component
};

/// Evaluates the disturbance acceleration at position p, velocity v and
/// heading psi. Output norm is clamped to field.f_max.
Vec3 eval_wind(const WindField& field, const Vec3& p, const Vec3& v, double psi);

/// First-order Gauss-Markov (Ornstein-Uhlenbeck) noise used to emulate
/// turbulence. Stationary standard deviation `sigma` per axis, bandwidth
/// `omega_n`; deterministic for a fixed seed and step sequence.
class TurbulenceNoise {
 public:
  TurbulenceNoise(double sigma, double omega_n, std::uint64_t seed);

  /// Advances the process by dt and returns the new value.
  Vec3 step(double dt);
  const Vec3& value() const { return value_; }

 private:
  double sigma_;
  double omega_n_;
  Rng rng_;
  Vec3 value_ = Vec3::Zero();
};

}  // namespace mrsim
