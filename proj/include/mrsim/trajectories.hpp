#pragma once

#include <variant>

#include "mrsim/types.hpp"

namespace mrsim {

/// Reference for the flat outputs (position and heading) with enough time
/// derivatives for snap-level feedforward.
struct FlatReference {
  Vec3 p = Vec3::Zero();      // m
  Vec3 v = Vec3::Zero();      // m/s
  Vec3 a = Vec3::Zero();      // m/s^2
  Vec3 j = Vec3::Zero();      // m/s^3
  Vec3 s = Vec3::Zero();      // m/s^4
  double psi = 0.0;           // rad
  double psi_dot = 0.0;       // rad/s
  double psi_ddot = 0.0;      // rad/s^2
};

/// Constant pose hold.
struct HoverReference {
  Vec3 p = Vec3::Zero();
  double psi = 0.0;
};

/// Instantaneous setpoint change at t = 0 (derivatives all zero).
struct StepReference {
  Vec3 p_from = Vec3::Zero();
  double psi_from = 0.0;
  Vec3 p_to = Vec3::Zero();
  double psi_to = 0.0;
};

/// Alternating square-wave setpoint: base <-> base + delta every period.
/// After 2 * count half-periods the reference holds at base.
struct StepSequence {
  Vec3 base = Vec3::Zero();
  Vec3 delta = Vec3(0.0, 3.0, 0.0);
  double psi = 0.0;
  double period = 4.0;        // s per setpoint hold
  int count = 10;             // number of away-steps
};

/// Smooth Lissajous sweep with a 1:2:2 frequency ratio across x/y/z. The
/// constructor rescales amplitude and rate so the speed and acceleration
/// envelopes are met exactly (scanned over one period).
class WeaveReference {
 public:
  /// shape: relative per-axis amplitudes before rescaling.
  WeaveReference(double max_speed, double max_accel,
                 const Vec3& shape = Vec3(2.0, 1.0, 0.5),
                 const Vec3& center = Vec3::Zero());

  FlatReference at(double t) const;
  double period() const { return 2.0 * M_PI / omega_; }
  const Vec3& amplitude() const { return amp_; }
  double rate() const { return omega_; }

 private:
  Vec3 amp_;
  Vec3 center_;
  double omega_;
};

/// Fixed position, heading ramps at `rate` for `revolutions` then holds.
struct YawInPlaceReference {
  Vec3 p = Vec3::Zero();
  double rate = 2.0 * M_PI / 3.0;  // rad/s (120 deg/s)
  double revolutions = 4.0;
  double hold = 2.0;               // s of hold appended after the ramp
};

using Trajectory = std::variant<HoverReference, StepReference, StepSequence,
                                WeaveReference, YawInPlaceReference>;

/// Evaluates the reference at time t (t < 0 clamps to the initial pose).
FlatReference eval_reference(const Trajectory& traj, double t);

/// Natural segment length used for per-revolution metrics: the weave period,
/// one yaw revolution, or one step hold; 0 when segmentation is meaningless.
double revolution_period(const Trajectory& traj);

/// Length of one trial (a repeating block of the scenario): three weave
/// circuits, a full yaw ramp plus hold, the whole step sequence; 0 if the
/// trajectory does not repeat.
double trial_duration(const Trajectory& traj);

}  // namespace mrsim
