#pragma once

#include "mrsim/types.hpp"

namespace mrsim {

/// Skew-symmetric (cross-product) matrix: hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

/// Inverse of hat() for skew-symmetric matrices.
Vec3 vee(const Mat3& m);

/// Nearest rotation matrix to m (Newton iteration on the polar factor).
/// Requires m to be within distance ~0.1 of the orthogonal group.
Mat3 orthonormalized(const Mat3& m);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Rotation matrix with enforced orthonormality. Body-to-world convention:
/// columns are the body axes expressed in world coordinates.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }

  /// Accepts a matrix that is already close to orthonormal (re-polishes it);
  /// throws std::invalid_argument otherwise.
  static Rotation from_matrix(const Mat3& m);

  /// Exponential map so(3) -> SO(3); series expansion below 1e-8 rad.
  static Rotation exp(const Vec3& phi);

  const Mat3& matrix() const { return m_; }
  Vec3 col(int i) const { return m_.col(i); }
  /// Body z-axis in world coordinates (thrust direction).
  Vec3 z() const { return m_.col(2); }
  Vec3 rotate(const Vec3& v) const { return m_ * v; }
  Vec3 unrotate(const Vec3& v) const { return m_.transpose() * v; }
  Rotation transposed() const { return Rotation(Mat3(m_.transpose()), true); }
  Rotation operator*(const Rotation& o) const {
    return Rotation(orthonormalized(m_ * o.m_), true);
  }
  /// Heading angle: atan2 of the body x-axis projected to the world xy-plane.
  double yaw() const;

 private:
  Rotation(const Mat3& m, bool /*trusted*/) : m_(m) {}
  Mat3 m_;
};

/// Exponential map returning a Rotation (alias of Rotation::exp).
Rotation exp_so3(const Vec3& phi);

/// Advances r by a constant body angular velocity over dt:
/// r * exp(omega * dt), re-orthonormalized.
Rotation integrate_rotation(const Rotation& r, const Vec3& omega, double dt);

}  // namespace mrsim
