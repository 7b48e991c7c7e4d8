#pragma once

#include <Eigen/Dense>

namespace mrsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Acceleration disturbance and its first two time derivatives, as supplied
/// to the controllers by a disturbance model (or zeroed when none is active).
struct DisturbanceTriple {
  Vec3 f = Vec3::Zero();       // m/s^2
  Vec3 f_dot = Vec3::Zero();   // m/s^3
  Vec3 f_ddot = Vec3::Zero();  // m/s^4
};

}  // namespace mrsim
