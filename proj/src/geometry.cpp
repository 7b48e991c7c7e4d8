#include "mrsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mrsim {

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

Mat3 orthonormalized(const Mat3& m) {
  // One Newton step toward the polar factor; quadratic convergence keeps
  // round-off drift at machine precision when m is already near SO(3).
  Mat3 r = 0.5 * m * (3.0 * Mat3::Identity() - m.transpose() * m);
  return 0.5 * r * (3.0 * Mat3::Identity() - r.transpose() * r);
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

Rotation Rotation::from_matrix(const Mat3& m) {
  if (!m.allFinite()) throw std::invalid_argument("rotation matrix must be finite");
  const double defect = (m.transpose() * m - Mat3::Identity()).norm();
  if (defect > 0.1 || m.determinant() < 0.0)
    throw std::invalid_argument("matrix is not close to a rotation");
  return Rotation(orthonormalized(m), true);
}

Rotation Rotation::exp(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const Mat3 k = hat(phi);
  Mat3 m;
  if (theta2 < 1e-16) {
    // Second-order series; exact to double precision below 1e-8 rad.
    m = Mat3::Identity() + k + 0.5 * k * k;
  } else {
    const double theta = std::sqrt(theta2);
    m = Mat3::Identity() + (std::sin(theta) / theta) * k +
        ((1.0 - std::cos(theta)) / theta2) * k * k;
  }
  return Rotation(orthonormalized(m), true);
}

double Rotation::yaw() const { return std::atan2(m_(1, 0), m_(0, 0)); }

Rotation exp_so3(const Vec3& phi) { return Rotation::exp(phi); }

Rotation integrate_rotation(const Rotation& r, const Vec3& omega, double dt) {
  return r * Rotation::exp(omega * dt);
}

}  // namespace mrsim
