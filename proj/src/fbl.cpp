#include "mrsim/fbl.hpp"

#include <cmath>
#include <stdexcept>

namespace mrsim {

void FblGains::validate() const {
  if (tau_u <= 0.0 || k3 <= 0.0 || k4 <= 0.0 || u_min <= 0.0 || k_yaw <= 0.0 ||
      k_yaw_rate <= 0.0)
    throw std::invalid_argument("gains must be positive");
  for (int i = 0; i < 3; ++i) {
    if (k1[i] <= 0.0 || k2[i] <= 0.0)
      throw std::invalid_argument("gains must be positive");
    // Routh-Hurwitz for s^4 + k4 s^3 + k3 s^2 + k2 s + k1.
    const double d1 = k4 * k3 - k2[i];
    if (d1 <= 0.0 || d1 * k2[i] - k4 * k4 * k1[i] <= 0.0)
      throw std::invalid_argument("error dynamics are not Hurwitz");
  }
}

FblControllerState fbl_hover_state(const VehicleState& x, const Vec3& g, const Vec3& f_e) {
  FblControllerState s;
  s.u = std::max(-(g + f_e).dot(x.R.z()), 0.0);
  s.u_des = s.u;
  s.u_dot = 0.0;
  return s;
}

AccelJerk feedback_acc_jerk(const VehicleState& x, const FblControllerState& ctl,
                            const DisturbanceTriple& d, const Vec3& g) {
  const Vec3 z = x.R.z();
  const Vec3 z_dot = x.R.rotate(x.omega).cross(z);
  return {ctl.u * z + g + d.f, ctl.u_dot * z + ctl.u * z_dot + d.f_dot};
}

Vec3 snap_feedforward(const Vec3& p_err, const Vec3& v_err, const FlatReference& ref,
                      const FblGains& gains, const DisturbanceTriple& d) {
  return -gains.k1.cwiseProduct(p_err) - gains.k2.cwiseProduct(v_err) +
         gains.k3 * (ref.a - d.f) + gains.k4 * (ref.j - d.f_dot) + ref.s - d.f_ddot;
}

double yaw_alpha(const VehicleState& x, const FlatReference& ref, const FblGains& gains) {
  const double psi_err = wrap_angle(ref.psi - x.R.yaw());
  const double rate_world = x.R.rotate(x.omega).z();
  return gains.k_yaw * psi_err + gains.k_yaw_rate * (ref.psi_dot - rate_world) +
         ref.psi_ddot * x.R.z().z();
}

FblCommand fbl_control(const VehicleState& x, const FblControllerState& ctl,
                       const FlatReference& ref, const DisturbanceTriple& d,
                       const FblGains& gains, const Vec3& g, bool delay_comp, double dt) {
  const Vec3 s_ff = snap_feedforward(x.p - ref.p, x.v - ref.v, ref, gains, d);
  return fbl_inner_step(x.R, x.omega, s_ff, g, yaw_alpha(x, ref, gains), ctl, gains,
                        delay_comp, dt);
}

}  // namespace mrsim
