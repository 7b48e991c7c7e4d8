#include "mrsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrsim {

namespace {

bool finite(const VehicleState& x) {
  return x.p.allFinite() && x.v.allFinite() && x.R.matrix().allFinite() &&
         x.omega.allFinite() && std::isfinite(x.u);
}

double clamp_thrust(double u_des, const PlantParams& prm) {
  return std::clamp(u_des, 0.0, prm.u_max);
}

}  // namespace

StateDerivative plant_derivative(const VehicleState& x, const PlantCommand& cmd,
                                 const PlantParams& prm, const WindField& field) {
  StateDerivative d;
  d.p_dot = x.v;
  d.v_dot = x.u * x.R.z() + prm.g + eval_wind(field, x.p, x.v, x.R.yaw());
  d.omega = x.omega;
  d.omega_dot = cmd.alpha;
  d.u_dot = prm.tau_u ? -*prm.tau_u * (x.u - clamp_thrust(cmd.u_des, prm)) : 0.0;
  return d;
}

VehicleState plant_step(const VehicleState& x, const PlantCommand& cmd,
                        const PlantParams& prm, const WindField& field, double dt) {
  if (!finite(x) || !std::isfinite(cmd.u_des) || !cmd.alpha.allFinite() || !std::isfinite(dt))
    throw std::invalid_argument("invalid state");

  const double u_des = clamp_thrust(cmd.u_des, prm);
  const bool lag = prm.tau_u.has_value();

  // Attitude increment over [0, tau]: two-term Magnus expansion of
  // omega(t) = omega0 + alpha t for the body-frame convention dR = R w^ dt
  // (the commutator term enters with + for right multiplication). The next
  // Magnus term vanishes for linear-in-time rates, so stage thrust
  // directions are accurate to O(tau^5) and translation keeps RK4 order.
  const Vec3 w0 = x.omega;
  const Vec3 al = cmd.alpha;
  auto rot_at = [&](double tau) {
    const Vec3 phi = w0 * tau + 0.5 * al * tau * tau +
                     (tau * tau * tau / 12.0) * w0.cross(al);
    return x.R * Rotation::exp(phi);
  };

  struct Stage {
    Vec3 p, v;
    double u;
  };
  auto deriv = [&](const Stage& s, const Rotation& r) {
    Stage d;
    d.p = s.v;
    d.v = s.u * r.z() + prm.g + eval_wind(field, s.p, s.v, r.yaw());
    d.u = lag ? -*prm.tau_u * (s.u - u_des) : 0.0;
    return d;
  };

  Stage s0{x.p, x.v, lag ? x.u : u_des};
  const Rotation r_half = rot_at(0.5 * dt);
  const Rotation r_full = rot_at(dt);

  const Stage k1 = deriv(s0, x.R);
  const Stage k2 = deriv({s0.p + 0.5 * dt * k1.p, s0.v + 0.5 * dt * k1.v,
                          s0.u + 0.5 * dt * k1.u}, r_half);
  const Stage k3 = deriv({s0.p + 0.5 * dt * k2.p, s0.v + 0.5 * dt * k2.v,
                          s0.u + 0.5 * dt * k2.u}, r_half);
  const Stage k4 = deriv({s0.p + dt * k3.p, s0.v + dt * k3.v, s0.u + dt * k3.u},
                         r_full);

  VehicleState out;
  out.p = s0.p + (dt / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
  out.v = s0.v + (dt / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  out.u = std::clamp(s0.u + (dt / 6.0) * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
                     0.0, prm.u_max);
  out.R = r_full;
  out.omega = w0 + al * dt;
  return out;
}

double hover_thrust(const VehicleState& x, const PlantParams& prm, const Vec3& f_e) {
  return std::clamp(-(prm.g + f_e).dot(x.R.z()), 0.0, prm.u_max);
}

}  // namespace mrsim
