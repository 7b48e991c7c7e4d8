#include "mrsim/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

namespace mrsim {

void CascadedGains::validate() const {
  if (kp.minCoeff() <= 0.0 || kv.minCoeff() <= 0.0 || ktheta.minCoeff() <= 0.0 ||
      komega.minCoeff() <= 0.0 || u_min <= 0.0)
    throw std::invalid_argument("gains must be positive");
}

namespace {

Rotation attitude_from_thrust(const Vec3& z_d, double psi) {
  const Vec3 x_c(std::cos(psi), std::sin(psi), 0.0);
  Vec3 y_d = z_d.cross(x_c);
  const double n = y_d.norm();
  if (n < 1e-6) throw std::runtime_error("degenerate attitude setpoint");
  y_d /= n;
  Mat3 m;
  m.col(0) = y_d.cross(z_d);
  m.col(1) = y_d;
  m.col(2) = z_d;
  return Rotation::from_matrix(m);
}

}  // namespace

AttitudeSetpoint baseline_position_loop(const VehicleState& x, const FlatReference& ref,
                                        const CascadedGains& gains,
                                        const DisturbanceTriple& d, const Vec3& g) {
  const Vec3 a_cmd = -gains.kp.cwiseProduct(x.p - ref.p) -
                     gains.kv.cwiseProduct(x.v - ref.v) + ref.a - d.f;
  AttitudeSetpoint sp;
  sp.h = a_cmd - g;
  const double h_norm = sp.h.norm();
  if (h_norm < gains.u_min) throw std::runtime_error("free-fall command");
  sp.R_d = attitude_from_thrust(sp.h / h_norm, ref.psi);

  // Rate and acceleration feedforward by inverting the smooth part of the
  // command: the reference chain plus the estimate and its derivatives (when
  // supplied).
  const Vec3 h_ref = ref.a - d.f - g;
  const double c = h_ref.norm();
  if (c > gains.u_min) {
    const Vec3 h_ref_dot = ref.j - d.f_dot;
    const Vec3 h_ref_ddot = ref.s - d.f_ddot;
    const Vec3 z_r = h_ref / c;
    const double c_dot = z_r.dot(h_ref_dot);
    const Vec3 z_r_dot = (h_ref_dot - c_dot * z_r) / c;
    const Vec3 z_r_ddot = (h_ref_ddot - z_r.dot(h_ref_ddot) * z_r -
                           z_r_dot.dot(h_ref_dot) * z_r - 2.0 * c_dot * z_r_dot) /
                          c;
    const Vec3 omega_w = z_r.cross(z_r_dot) + ref.psi_dot * z_r.z() * z_r;
    const Vec3 omega_w_dot = z_r.cross(z_r_ddot) + ref.psi_ddot * z_r.z() * z_r +
                             ref.psi_dot * (z_r_dot.z() * z_r + z_r.z() * z_r_dot);
    sp.omega_d = sp.R_d.unrotate(omega_w);
    // With Omega_d = R_d^T omega_w, the transport term R_d^T-dot omega_w =
    // -Omega_d x Omega_d vanishes, so the body-frame rate derivative is the
    // unrotated world-frame one.
    sp.alpha_d = sp.R_d.unrotate(omega_w_dot);
  }
  return sp;
}

namespace {

PlantCommand attitude_command(const VehicleState& x, const AttitudeSetpoint& sp,
                              const CascadedGains& gains, const Vec3& e_att) {
  const Vec3 omega_d_body = x.R.transposed().rotate(sp.R_d.rotate(sp.omega_d));
  const Vec3 alpha_d_body = x.R.transposed().rotate(sp.R_d.rotate(sp.alpha_d));
  const Vec3 e_omega = x.omega - omega_d_body;
  PlantCommand cmd;
  cmd.u_des = sp.h.dot(x.R.z());
  cmd.alpha = -gains.ktheta.cwiseProduct(e_att) - gains.komega.cwiseProduct(e_omega) -
              x.omega.cross(omega_d_body) + alpha_d_body;
  return cmd;
}

}  // namespace

PlantCommand cascaded_attitude_loop(const VehicleState& x, const AttitudeSetpoint& sp,
                                    const CascadedGains& gains) {
  const Mat3 q = sp.R_d.matrix().transpose() * x.R.matrix();
  const Vec3 e_r = 0.5 * vee(q - q.transpose());
  return attitude_command(x, sp, gains, e_r);
}

PlantCommand reduced_attitude_loop(const VehicleState& x, const AttitudeSetpoint& sp,
                                   const CascadedGains& gains) {
  // Thrust-axis error: identical to the full rotation error whenever the
  // heading error vanishes, but independent of it otherwise.
  const Vec3 e_tilt = x.R.unrotate(sp.R_d.z().cross(x.R.z()));
  // Residual twist about body z of R_d^T R.
  const Eigen::Quaterniond q(sp.R_d.matrix().transpose() * x.R.matrix());
  double e_yaw = 0.0;
  if (std::abs(q.w()) > 1e-12 || std::abs(q.z()) > 1e-12)
    e_yaw = wrap_angle(2.0 * std::atan2(q.z(), q.w()));
  return attitude_command(x, sp, gains, Vec3(e_tilt.x(), e_tilt.y(), e_yaw));
}

PlantCommand cascaded_control(const VehicleState& x, const FlatReference& ref,
                              const CascadedGains& gains, const DisturbanceTriple& d,
                              const Vec3& g) {
  return cascaded_attitude_loop(x, baseline_position_loop(x, ref, gains, d, g), gains);
}

PlantCommand reduced_attitude_control(const VehicleState& x, const FlatReference& ref,
                                      const CascadedGains& gains,
                                      const DisturbanceTriple& d, const Vec3& g) {
  return reduced_attitude_loop(x, baseline_position_loop(x, ref, gains, d, g), gains);
}

namespace {

Vec3 clamp_norm(const Vec3& v, double bound) {
  const double n = v.norm();
  return n > bound ? Vec3(v * (bound / n)) : v;
}

}  // namespace

AdaptiveEstimator adaptive_update(const AdaptiveEstimator& est, const VehicleState& x,
                                  double u_applied, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  AdaptiveEstimator out = est;
  if (est.primed) {
    const Vec3 fd = (x.v - est.v_prev) / dt - est.model_acc_prev;
    const double a_raw = 1.0 - std::exp(-est.gamma * dt);
    const double a_f = 1.0 - std::exp(-est.omega_f * dt);
    out.raw = clamp_norm(est.raw + a_raw * (fd - est.raw), est.bound);
    out.d_hat = clamp_norm(est.d_hat + a_f * (out.raw - est.d_hat), est.bound);
  }
  out.primed = true;
  out.v_prev = x.v;
  out.model_acc_prev = u_applied * x.R.z() + est.g;
  return out;
}

}  // namespace mrsim
