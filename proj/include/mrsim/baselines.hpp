#pragma once

#include "mrsim/dynamics.hpp"
#include "mrsim/trajectories.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// Gains of the cascaded position -> attitude controllers.
struct CascadedGains {
  Vec3 kp = Vec3(5.47, 5.47, 10.0);
  Vec3 kv = Vec3(3.16, 3.16, 6.0);
  Vec3 ktheta = Vec3(190.0, 190.0, 30.0);
  Vec3 komega = Vec3(25.0, 25.0, 10.0);
  double u_min = 1.0;  // m/s^2, minimum commanded thrust-vector norm

  void validate() const;
};

/// Position-loop output shared by both attitude variants: commanded thrust
/// vector, desired attitude, and rate/acceleration feedforward
/// (desired-body frame).
struct AttitudeSetpoint {
  Vec3 h = Vec3(0.0, 0.0, 9.81);  // m/s^2, a_cmd - g
  Rotation R_d;
  Vec3 omega_d = Vec3::Zero();    // rad/s
  Vec3 alpha_d = Vec3::Zero();    // rad/s^2
};

/// Position loop: a_cmd = -kp p_err - kv v_err + a_des - d.f, attitude from
/// the thrust vector and the reference heading. The rate and acceleration
/// feedforwards invert the smooth part of the command chain -- the
/// reference's jerk and snap together with the estimate's first and second
/// derivatives -- so a derivative-capable estimator lets the attitude
/// setpoint lead a changing disturbance instead of trailing it. Throws
/// std::runtime_error when the commanded thrust vector collapses below u_min
/// (free-fall command).
AttitudeSetpoint baseline_position_loop(const VehicleState& x, const FlatReference& ref,
                                        const CascadedGains& gains,
                                        const DisturbanceTriple& d, const Vec3& g);

/// Attitude loop with the full rotation error
/// e_R = 0.5 vee(R_d^T R - R^T R_d); thrust is the setpoint projected on the
/// current body z-axis.
PlantCommand cascaded_attitude_loop(const VehicleState& x, const AttitudeSetpoint& sp,
                                    const CascadedGains& gains);

/// Attitude loop splitting the error into the thrust-axis geodesic
/// (R^T (z_d x z), no heading content) and the residual twist about body z,
/// so a heading error cannot deflect the thrust axis.
PlantCommand reduced_attitude_loop(const VehicleState& x, const AttitudeSetpoint& sp,
                                   const CascadedGains& gains);

/// Single-rate compositions of position and attitude loops.
PlantCommand cascaded_control(const VehicleState& x, const FlatReference& ref,
                              const CascadedGains& gains, const DisturbanceTriple& d,
                              const Vec3& g);
PlantCommand reduced_attitude_control(const VehicleState& x, const FlatReference& ref,
                                      const CascadedGains& gains,
                                      const DisturbanceTriple& d, const Vec3& g);

/// Disturbance estimator used by the non-learning baseline: a velocity
/// predictor drives a raw estimate with bandwidth gamma, and the published
/// estimate d_hat is the omega_f low-pass of it, clamped to `bound`. In the
/// gamma, omega_f -> inf limit the output reproduces the one-step
/// finite-difference residual exactly.
struct AdaptiveEstimator {
  double gamma = 100.0;    // 1/s
  double omega_f = 5.0;    // rad/s
  double bound = 15.0;     // m/s^2
  Vec3 g = Vec3(0.0, 0.0, -9.81);

  Vec3 d_hat = Vec3::Zero();
  Vec3 raw = Vec3::Zero();
  bool primed = false;
  Vec3 v_prev = Vec3::Zero();
  Vec3 model_acc_prev = Vec3::Zero();
};

/// Advances the estimator with a velocity sample and the thrust believed
/// applied over the elapsed interval.
AdaptiveEstimator adaptive_update(const AdaptiveEstimator& est, const VehicleState& x,
                                  double u_applied, double dt);

}  // namespace mrsim
