#pragma once

#include <optional>

#include "mrsim/geometry.hpp"
#include "mrsim/types.hpp"
#include "mrsim/wind.hpp"

namespace mrsim {

/// Full simulator state. Thrust u is the realized mass-normalized collective
/// acceleration along the body z-axis (u >= 0).
struct VehicleState {
  Vec3 p = Vec3::Zero();        // m, world position (z up)
  Vec3 v = Vec3::Zero();        // m/s, world velocity
  Rotation R;                   // body-to-world attitude
  Vec3 omega = Vec3::Zero();    // rad/s, body angular velocity
  double u = 0.0;               // m/s^2, realized collective thrust
};

/// Inputs accepted by the plant: a collective-thrust setpoint and a body
/// angular acceleration. u_des is clamped to [0, u_max] on ingestion.
struct PlantCommand {
  double u_des = 0.0;           // m/s^2
  Vec3 alpha = Vec3::Zero();    // rad/s^2, body frame
};

struct PlantParams {
  /// First-order thrust-lag rate (1/s); disengaged (instant thrust) if empty.
  std::optional<double> tau_u = 10.0;
  double u_max = 5.0 * 9.81;    // m/s^2, max collective thrust
  Vec3 g = Vec3(0.0, 0.0, -9.81);  // m/s^2, world gravity
};

struct StateDerivative {
  Vec3 p_dot;
  Vec3 v_dot;
  Vec3 omega;        // body rates driving R_dot = R * hat(omega)
  Vec3 omega_dot;
  double u_dot;
};

/// Continuous-time dynamics at the given state and (clamped) command.
StateDerivative plant_derivative(const VehicleState& x, const PlantCommand& cmd,
                                 const PlantParams& prm, const WindField& field);

/// Advances the state by dt: RK4 on (p, v, u) with the disturbance field and
/// thrust direction evaluated at stage states, attitude via the exponential
/// map with the angular rate advanced exactly (alpha constant over the step).
/// Throws std::invalid_argument on non-finite state or command.
VehicleState plant_step(const VehicleState& x, const PlantCommand& cmd,
                        const PlantParams& prm, const WindField& field, double dt);

/// Thrust that cancels gravity and f_e along the current body z-axis.
double hover_thrust(const VehicleState& x, const PlantParams& prm, const Vec3& f_e);

}  // namespace mrsim
