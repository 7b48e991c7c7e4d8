#pragma once

#include <stdexcept>

#include "mrsim/dynamics.hpp"
#include "mrsim/trajectories.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// Gains of the snap-level linearizing controller. k1/k2 are per-axis
/// (position/velocity), k3/k4 scalar (acceleration/jerk) so the snap law
/// commutes with heading rotations. tau_u is the thrust-lag rate the
/// controller compensates; k_yaw/k_yaw_rate drive the heading loop.
struct FblGains {
  Vec3 k1 = Vec3(1040.0, 1040.0, 1900.0);
  Vec3 k2 = Vec3(600.0, 600.0, 1140.0);
  double k3 = 190.0;
  double k4 = 25.0;
  double tau_u = 10.0;
  double k_yaw = 30.0;
  double k_yaw_rate = 10.0;
  double u_min = 1.0;  // m/s^2, below which the law is singular

  /// Positivity plus per-axis Routh-Hurwitz of
  /// s^4 + k4 s^3 + k3 s^2 + k2 s + k1; throws std::invalid_argument.
  void validate() const;
};

/// Internal thrust states of the dynamic extension. With delay compensation
/// the controller integrates its own copy of the actuator model
/// (u_dot = -tau_u (u - u_des)); without it, u_des tracks u and u/u_dot form
/// a double integrator driven by the solved second thrust derivative.
struct FblControllerState {
  double u = 0.0;      // m/s^2, thrust estimate
  double u_des = 0.0;  // m/s^2, setpoint handed to the plant
  double u_dot = 0.0;  // m/s^3
};

/// Hover-consistent controller state for engagement at x with disturbance f_e.
FblControllerState fbl_hover_state(const VehicleState& x, const Vec3& g, const Vec3& f_e);

struct AccelJerk {
  Vec3 a;
  Vec3 j;
};

/// Acceleration/jerk reconstruction from the thrust states and the
/// disturbance model:
///   a = u z + g + f_e,   j = u_dot z + u z_dot + f_e_dot,
/// with z_dot = (R omega) x z.
AccelJerk feedback_acc_jerk(const VehicleState& x, const FblControllerState& ctl,
                            const DisturbanceTriple& d, const Vec3& g);

/// Snap feedforward held between position-feedback updates:
///   s_ff = -k1 p_err - k2 v_err + k3 (a_des - f_e) + k4 (j_des - f_e_dot)
///          + s_des - f_e_ddot.
Vec3 snap_feedforward(const Vec3& p_err, const Vec3& v_err, const FlatReference& ref,
                      const FblGains& gains, const DisturbanceTriple& d);

struct FblCommand {
  PlantCommand cmd;
  FblControllerState next;
};

/// Inner-rate body law: rotates s_ff and gravity into the body frame,
/// evaluates the lateral angular-acceleration and thrust-derivative laws, and
/// advances the extension states by dt. alpha_z is the heading angular
/// acceleration to merge into the command. Throws ThrustSingularity when the
/// thrust estimate falls below gains.u_min.
FblCommand fbl_inner_step(const Rotation& R, const Vec3& omega, const Vec3& s_ff,
                          const Vec3& g, double alpha_z, const FblControllerState& ctl,
                          const FblGains& gains, bool delay_comp, double dt);

/// Heading loop: alpha_z = k_yaw wrap(psi_des - psi)
///                + k_yaw_rate (psi_dot_des - omega_world_z)
///                + psi_ddot_des projected onto the body z-axis.
double yaw_alpha(const VehicleState& x, const FlatReference& ref, const FblGains& gains);

/// Single-rate composition of the full controller (feedback errors, snap
/// feedforward, heading loop, inner body law).
FblCommand fbl_control(const VehicleState& x, const FblControllerState& ctl,
                       const FlatReference& ref, const DisturbanceTriple& d,
                       const FblGains& gains, const Vec3& g, bool delay_comp, double dt);

class ThrustSingularity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrsim
