#include "mrsim/trajectories.hpp"

#include "mrsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mrsim {

namespace {

FlatReference hold_pose(const Vec3& p, double psi) {
  FlatReference r;
  r.p = p;
  r.psi = psi;
  return r;
}

}  // namespace

WeaveReference::WeaveReference(double max_speed, double max_accel,
                               const Vec3& shape, const Vec3& center)
    : amp_(shape), center_(center), omega_(1.0) {
  if (max_speed <= 0.0 || max_accel <= 0.0 || shape.minCoeff() <= 0.0)
    throw std::invalid_argument("weave envelope must be positive");
  // Unit-rate shape: s(t) = shape .* (sin t, sin 2t, cos 2t). Scan one period
  // for the velocity/acceleration envelope constants, then solve the uniform
  // scale and rate that meet both limits exactly.
  const int n = 200000;
  double cv = 0.0, ca = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * i / n;
    const Vec3 v(shape.x() * std::cos(t), 2.0 * shape.y() * std::cos(2.0 * t),
                 -2.0 * shape.z() * std::sin(2.0 * t));
    const Vec3 a(-shape.x() * std::sin(t), -4.0 * shape.y() * std::sin(2.0 * t),
                 -4.0 * shape.z() * std::cos(2.0 * t));
    cv = std::max(cv, v.norm());
    ca = std::max(ca, a.norm());
  }
  omega_ = max_accel * cv / (max_speed * ca);
  amp_ = shape * (max_speed / (omega_ * cv));
}

FlatReference WeaveReference::at(double t) const {
  const double w = omega_;
  const double s1 = std::sin(w * t), c1 = std::cos(w * t);
  const double s2 = std::sin(2.0 * w * t), c2 = std::cos(2.0 * w * t);
  const double w2 = w * w, w3 = w2 * w, w4 = w2 * w2;
  FlatReference r;
  r.p = center_ + Vec3(amp_.x() * s1, amp_.y() * s2, amp_.z() * c2);
  r.v = Vec3(amp_.x() * w * c1, amp_.y() * 2.0 * w * c2, -amp_.z() * 2.0 * w * s2);
  r.a = Vec3(-amp_.x() * w2 * s1, -amp_.y() * 4.0 * w2 * s2, -amp_.z() * 4.0 * w2 * c2);
  r.j = Vec3(-amp_.x() * w3 * c1, -amp_.y() * 8.0 * w3 * c2, amp_.z() * 8.0 * w3 * s2);
  r.s = Vec3(amp_.x() * w4 * s1, amp_.y() * 16.0 * w4 * s2, amp_.z() * 16.0 * w4 * c2);
  return r;
}

FlatReference eval_reference(const Trajectory& traj, double t) {
  return std::visit(
      [t](const auto& tr) -> FlatReference {
        using T = std::decay_t<decltype(tr)>;
        if constexpr (std::is_same_v<T, HoverReference>) {
          return hold_pose(tr.p, tr.psi);
        } else if constexpr (std::is_same_v<T, StepReference>) {
          return t < 0.0 ? hold_pose(tr.p_from, tr.psi_from)
                         : hold_pose(tr.p_to, tr.psi_to);
        } else if constexpr (std::is_same_v<T, StepSequence>) {
          if (t < 0.0) return hold_pose(tr.base, tr.psi);
          const int k = static_cast<int>(std::floor(t / tr.period));
          const bool away = (k % 2 == 0) && k < 2 * tr.count;
          return hold_pose(away ? Vec3(tr.base + tr.delta) : tr.base, tr.psi);
        } else if constexpr (std::is_same_v<T, WeaveReference>) {
          return tr.at(std::max(t, 0.0));
        } else {
          static_assert(std::is_same_v<T, YawInPlaceReference>);
          FlatReference r = hold_pose(tr.p, 0.0);
          const double t_ramp = tr.revolutions * 2.0 * M_PI / tr.rate;
          if (t > 0.0 && t < t_ramp) {
            r.psi = wrap_angle(tr.rate * t);
            r.psi_dot = tr.rate;
          } else if (t >= t_ramp) {
            r.psi = wrap_angle(tr.rate * t_ramp);
          }
          return r;
        }
      },
      traj);
}

double revolution_period(const Trajectory& traj) {
  return std::visit(
      [](const auto& tr) -> double {
        using T = std::decay_t<decltype(tr)>;
        if constexpr (std::is_same_v<T, StepSequence>) return tr.period;
        else if constexpr (std::is_same_v<T, WeaveReference>) return tr.period();
        else if constexpr (std::is_same_v<T, YawInPlaceReference>)
          return 2.0 * M_PI / tr.rate;
        else return 0.0;
      },
      traj);
}

double trial_duration(const Trajectory& traj) {
  return std::visit(
      [](const auto& tr) -> double {
        using T = std::decay_t<decltype(tr)>;
        if constexpr (std::is_same_v<T, StepSequence>)
          return 2.0 * tr.period * tr.count;
        else if constexpr (std::is_same_v<T, WeaveReference>)
          return 3.0 * tr.period();
        else if constexpr (std::is_same_v<T, YawInPlaceReference>)
          return tr.revolutions * 2.0 * M_PI / tr.rate + tr.hold;
        else return 0.0;
      },
      traj);
}

}  // namespace mrsim
