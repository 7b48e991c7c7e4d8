// Inner-rate body law of the linearizing controller. Deliberately free of
// trigonometric evaluations: everything is expressed through body-frame
// vectors, cross products and the thrust extension states, so the hot path
// runs on IMU-rate data without angle extraction.
#include <cmath>

#include "mrsim/fbl.hpp"

namespace mrsim {

FblCommand fbl_inner_step(const Rotation& R, const Vec3& omega, const Vec3& s_ff,
                          const Vec3& g, double alpha_z, const FblControllerState& ctl,
                          const FblGains& gains, bool delay_comp, double dt) {
  if (ctl.u < gains.u_min) throw ThrustSingularity("thrust singularity");

  const Vec3 e3(0.0, 0.0, 1.0);
  const Vec3 s_ff_b = R.unrotate(s_ff);
  const Vec3 g_b = R.unrotate(g);
  const double omega_z = omega.z();
  const Vec3 omega_xy(omega.x(), omega.y(), 0.0);

  const Vec3 alpha_xy =
      (e3.cross(s_ff_b) - gains.k3 * e3.cross(g_b) - 2.0 * ctl.u_dot * omega_xy) / ctl.u -
      gains.k4 * omega_xy - omega_z * e3.cross(omega);

  // Snap demand projected on the thrust axis, after the linear feedback terms
  // in thrust and its derivative and the centripetal correction.
  const double u_axis = s_ff_b.dot(e3) - gains.k3 * (ctl.u + g_b.dot(e3)) -
                        gains.k4 * ctl.u_dot + ctl.u * omega_xy.squaredNorm();

  FblCommand out;
  out.cmd.alpha = Vec3(alpha_xy.x(), alpha_xy.y(), alpha_z);
  FblControllerState& n = out.next;
  if (delay_comp) {
    const double u_dot_des = u_axis / gains.tau_u - gains.tau_u * (ctl.u - ctl.u_des);
    n.u_des = ctl.u_des + u_dot_des * dt;
    // Exact first-order-lag propagation of the thrust estimate over dt.
    const double decay = std::exp(-gains.tau_u * dt);
    n.u = n.u_des + (ctl.u - n.u_des) * decay;
    n.u_dot = -gains.tau_u * (n.u - n.u_des);
    out.cmd.u_des = n.u_des;
  } else {
    // Double-integrator extension: u_axis is the solved second derivative of
    // thrust; the plant is assumed to realize the setpoint directly.
    n.u = ctl.u + ctl.u_dot * dt + 0.5 * u_axis * dt * dt;
    n.u_dot = ctl.u_dot + u_axis * dt;
    n.u_des = n.u;
    out.cmd.u_des = n.u;
  }
  return out;
}

}  // namespace mrsim
