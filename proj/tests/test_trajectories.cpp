#include <doctest.h>

#include <cmath>

#include "mrsim/geometry.hpp"
#include "mrsim/trajectories.hpp"

using namespace mrsim;

namespace {

// Central finite differences of the position/heading outputs.
void check_derivative_chain(const Trajectory& traj, double t, double tol) {
  const double h = 1e-4;
  const FlatReference rm = eval_reference(traj, t - h);
  const FlatReference r0 = eval_reference(traj, t);
  const FlatReference rp = eval_reference(traj, t + h);
  CHECK(((rp.p - rm.p) / (2 * h) - r0.v).norm() < tol);
  CHECK(((rp.v - rm.v) / (2 * h) - r0.a).norm() < tol);
  CHECK(((rp.a - rm.a) / (2 * h) - r0.j).norm() < tol);
  CHECK(((rp.j - rm.j) / (2 * h) - r0.s).norm() < tol);
  CHECK(std::abs((rp.psi - rm.psi) / (2 * h) - r0.psi_dot) < tol);
  CHECK(std::abs((rp.psi_dot - rm.psi_dot) / (2 * h) - r0.psi_ddot) < tol);
}

}  // namespace

TEST_CASE("weave meets its speed and acceleration envelope") {
  const WeaveReference w(2.7, 5.5, Vec3(1.0, 1.0, 0.5));
  double vmax = 0.0, amax = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const FlatReference r = w.at(w.period() * i / n);
    vmax = std::max(vmax, r.v.norm());
    amax = std::max(amax, r.a.norm());
  }
  CHECK(vmax == doctest::Approx(2.7).epsilon(0.02));
  CHECK(amax == doctest::Approx(5.5).epsilon(0.02));
  CHECK(vmax <= 2.7 * 1.0001);
  CHECK(amax <= 5.5 * 1.0001);
}

TEST_CASE("weave derivatives agree with finite differences") {
  const WeaveReference w(2.7, 5.5, Vec3(2.0, 1.0, 0.5), Vec3(1, 2, 3));
  for (double t : {0.13, 1.7, 3.9, 5.2}) check_derivative_chain(w, t, 1e-5);
}

TEST_CASE("weave is periodic and centered") {
  const Vec3 center(1, -2, 0.5);
  const WeaveReference w(2.7, 5.5, Vec3(2.0, 1.0, 0.5), center);
  const double T = w.period();
  for (double t : {0.0, 0.4, 2.2}) {
    const FlatReference a = w.at(t);
    const FlatReference b = w.at(t + T);
    CHECK((a.p - b.p).norm() < 1e-9);
    CHECK((a.v - b.v).norm() < 1e-9);
  }
  // Mean position over a period sits at the center (pure sinusoids).
  Vec3 mean = Vec3::Zero();
  const int n = 20000;
  for (int i = 0; i < n; ++i) mean += w.at(T * i / n).p;
  CHECK((mean / n - center).norm() < 1e-6);
}

TEST_CASE("weave rejects a non-positive envelope") {
  CHECK_THROWS_AS(WeaveReference(0.0, 5.5), std::invalid_argument);
  CHECK_THROWS_AS(WeaveReference(2.7, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeaveReference(2.7, 5.5, Vec3(1, 0, 1)), std::invalid_argument);
}

TEST_CASE("step sequence alternates and then parks at base") {
  StepSequence s;
  s.base = Vec3(0, 0, 1);
  s.delta = Vec3(0, 3, 0);
  s.period = 4.0;
  s.count = 2;
  const Trajectory traj = s;
  CHECK((eval_reference(traj, -0.5).p - s.base).norm() == 0.0);
  CHECK((eval_reference(traj, 0.0).p - Vec3(0, 3, 1)).norm() == 0.0);
  CHECK((eval_reference(traj, 3.99).p - Vec3(0, 3, 1)).norm() == 0.0);
  CHECK((eval_reference(traj, 4.0).p - s.base).norm() == 0.0);
  CHECK((eval_reference(traj, 8.0).p - Vec3(0, 3, 1)).norm() == 0.0);
  CHECK((eval_reference(traj, 12.0).p - s.base).norm() == 0.0);
  // After 2*count half-periods the reference holds at base forever.
  CHECK((eval_reference(traj, 16.0).p - s.base).norm() == 0.0);
  CHECK((eval_reference(traj, 100.0).p - s.base).norm() == 0.0);
  CHECK(eval_reference(traj, 5.0).v.norm() == 0.0);
}

TEST_CASE("yaw ramp holds position and sweeps heading at constant rate") {
  YawInPlaceReference y;
  y.p = Vec3(0, 0, 2);
  y.rate = 2.0 * M_PI / 3.0;
  y.revolutions = 4.0;
  y.hold = 2.0;
  const Trajectory traj = y;
  const double t_ramp = y.revolutions * 2.0 * M_PI / y.rate;
  CHECK(t_ramp == doctest::Approx(12.0));
  for (double t : {0.5, 3.0, 11.0}) {
    const FlatReference r = eval_reference(traj, t);
    CHECK((r.p - y.p).norm() == 0.0);
    CHECK(r.psi == doctest::Approx(wrap_angle(y.rate * t)).epsilon(1e-12));
    CHECK(r.psi_dot == doctest::Approx(y.rate));
    check_derivative_chain(traj, t, 1e-5);
  }
  const FlatReference held = eval_reference(traj, t_ramp + 1.0);
  CHECK(held.psi_dot == 0.0);
  CHECK(held.psi == doctest::Approx(wrap_angle(y.rate * t_ramp)));
}

TEST_CASE("hover and step references clamp before zero") {
  StepReference st;
  st.p_from = Vec3(1, 0, 0);
  st.p_to = Vec3(0, 3, 0);
  st.psi_from = 0.2;
  st.psi_to = 1.5;
  const Trajectory traj = st;
  CHECK((eval_reference(traj, -1.0).p - st.p_from).norm() == 0.0);
  CHECK(eval_reference(traj, -1.0).psi == doctest::Approx(0.2));
  CHECK((eval_reference(traj, 0.0).p - st.p_to).norm() == 0.0);
  CHECK(eval_reference(traj, 5.0).psi == doctest::Approx(1.5));
}

TEST_CASE("segment and trial lengths are consistent") {
  const WeaveReference w(2.7, 5.5);
  CHECK(revolution_period(Trajectory(w)) == doctest::Approx(w.period()));
  CHECK(trial_duration(Trajectory(w)) == doctest::Approx(3.0 * w.period()));

  YawInPlaceReference y;
  CHECK(revolution_period(Trajectory(y)) == doctest::Approx(2.0 * M_PI / y.rate));
  CHECK(trial_duration(Trajectory(y)) ==
        doctest::Approx(y.revolutions * 2.0 * M_PI / y.rate + y.hold));

  StepSequence s;
  CHECK(revolution_period(Trajectory(s)) == doctest::Approx(s.period));
  CHECK(trial_duration(Trajectory(s)) == doctest::Approx(2.0 * s.period * s.count));

  CHECK(revolution_period(Trajectory(HoverReference{})) == 0.0);
  CHECK(trial_duration(Trajectory(HoverReference{})) == 0.0);
}
