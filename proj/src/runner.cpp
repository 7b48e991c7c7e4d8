#include "mrsim/harness.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include <Eigen/Geometry>

#include "mrsim/baselines.hpp"
#include "mrsim/fbl.hpp"
#include "mrsim/learner.hpp"
#include "mrsim/metrics.hpp"

namespace mrsim {

double scenario_duration(const ScenarioConfig& sc) {
  const double block = trial_duration(sc.trajectory);
  return block > 0.0 ? sc.trials * block : sc.duration;
}

VehicleState scenario_initial_state(const ScenarioConfig& sc) {
  const FlatReference ref = eval_reference(sc.trajectory, -1.0);
  VehicleState x;
  x.p = ref.p;
  x.v = ref.v;
  x.R = Rotation::exp(Vec3(0.0, 0.0, ref.psi));
  x.omega = Vec3(0.0, 0.0, ref.psi_dot);
  x.u = hover_thrust(x, sc.plant, Vec3::Zero());
  return x;
}

namespace {

/// Model-input time derivatives along the current state, using the
/// controller's thrust belief for the acceleration/jerk chain. The heading
/// rate is the world-z angular velocity and its derivative follows from the
/// last commanded angular acceleration (d/dt (R omega) = R alpha).
struct InputChain {
  Eigen::VectorXd xi, xi_dot, xi_ddot;
};

InputChain input_chain(const VehicleState& x, const DisturbanceModel& model,
                       double u_belief, double u_dot_belief, const Vec3& alpha_prev,
                       const Vec3& g, FeatureSet set) {
  const double psi = x.R.yaw();
  InputChain c;
  c.xi = make_input(x.p, x.v, psi, set);
  const int d = static_cast<int>(c.xi.size());
  c.xi_dot.resize(d);
  c.xi_ddot.resize(d);

  const Vec3 z = x.R.z();
  const Vec3 f = model.predict(c.xi);
  const Vec3 a = u_belief * z + g + f;
  c.xi_dot.head<3>() = x.v;
  c.xi_dot.segment<3>(3) = a;

  const Eigen::MatrixXd jac = model.predict_jacobian(c.xi);
  Vec3 f_dot;
  const Vec3 omega_w = x.R.rotate(x.omega);
  if (set == FeatureSet::pos_vel_yaw) {
    const double psi_dot = omega_w.z();
    c.xi_dot[6] = psi_dot * std::cos(psi);
    c.xi_dot[7] = -psi_dot * std::sin(psi);
    f_dot = jac * c.xi_dot;
    const double psi_ddot = x.R.rotate(alpha_prev).z();
    c.xi_ddot[6] = psi_ddot * std::cos(psi) - psi_dot * psi_dot * std::sin(psi);
    c.xi_ddot[7] = -psi_ddot * std::sin(psi) - psi_dot * psi_dot * std::cos(psi);
  } else {
    f_dot = jac * c.xi_dot;
  }
  const Vec3 z_dot = omega_w.cross(z);
  const Vec3 j = u_dot_belief * z + u_belief * z_dot + f_dot;
  c.xi_ddot.head<3>() = a;
  c.xi_ddot.segment<3>(3) = j;
  return c;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& sc) {
  sc.validate();
  const auto t_wall0 = std::chrono::steady_clock::now();

  const double total = scenario_duration(sc);
  const long n_steps = std::lround(total / sc.dt_inner);
  const long ratio = std::lround(sc.dt_outer / sc.dt_inner);

  const Vec3 g = sc.plant.g;
  const bool is_fbl = sc.controller == ControllerType::fbl ||
                      sc.controller == ControllerType::fbl_no_delay_comp;
  const bool delay_comp = sc.controller == ControllerType::fbl;
  const bool learned = sc.compensation == CompensationType::learned ||
                       sc.compensation == CompensationType::learned_no_dynamics;
  const bool with_dynamics = sc.compensation == CompensationType::learned;

  VehicleState x = scenario_initial_state(sc);
  FblControllerState ctl = fbl_hover_state(x, g, Vec3::Zero());
  AdaptiveEstimator est = sc.adaptive;  // parameters; state starts zeroed

  std::optional<DisturbanceModel> model;
  if (learned)
    model.emplace(sc.load_model.empty() ? DisturbanceModel(sc.learner)
                                        : DisturbanceModel::load(sc.load_model));

  std::optional<TurbulenceNoise> noise;
  if (sc.wind_noise_std > 0.0)
    noise.emplace(sc.wind_noise_std, sc.wind_noise_bandwidth,
                  sc.seed + 0x9e3779b97f4a7c15ull);

  WindField field = sc.wind;

  // Outer-held quantities.
  Vec3 s_ff = Vec3::Zero();
  AttitudeSetpoint sp;
  DisturbanceTriple dist;

  LearnerSample prev_sample;
  bool have_prev = false;
  Vec3 alpha_prev = Vec3::Zero();
  double u_belief_baseline = x.u;

  RunResult res;
  res.rev_period = revolution_period(sc.trajectory);
  const double block = trial_duration(sc.trajectory);
  res.metrics_start = sc.trials > 1 && block > 0.0 ? block : 0.0;
  res.log.reserve(static_cast<std::size_t>(n_steps));

  // Each trial repeats the same trajectory; references are evaluated on the
  // per-trial clock (identity for trajectories that are periodic per trial).
  const auto traj_time = [&](double tt) {
    return sc.trials > 1 && block > 0.0 ? std::fmod(tt, block) : tt;
  };

  double t = 0.0;
  try {
    for (long i = 0; i < n_steps; ++i) {
      const double u_belief = is_fbl ? ctl.u : u_belief_baseline;

      if (i % ratio == 0) {
        // Outer tick: estimator/learner refresh, then position feedback.
        if (sc.compensation == CompensationType::adaptive) {
          est = adaptive_update(est, x, u_belief, sc.dt_outer);
          dist = DisturbanceTriple{};
          dist.f = est.d_hat;
        } else if (learned) {
          LearnerSample cur;
          cur.p = x.p;
          cur.v = x.v;
          cur.z = x.R.z();
          cur.u = u_belief;
          cur.psi = x.R.yaw();
          if (have_prev)
            model->update(build_pair(prev_sample, cur, sc.dt_outer, sc.feature_set, g));
          prev_sample = cur;
          have_prev = true;

          if (model->updates_accepted() < sc.learner_warmup) {
            dist = DisturbanceTriple{};  // train but do not apply yet
          } else if (with_dynamics) {
            const InputChain c =
                input_chain(x, *model, u_belief, is_fbl ? ctl.u_dot : 0.0,
                            alpha_prev, g, sc.feature_set);
            dist = model->disturbance_triple(c.xi, c.xi_dot, c.xi_ddot);
          } else {
            dist = DisturbanceTriple{};
            dist.f = model->predict(make_input(x.p, x.v, cur.psi, sc.feature_set));
          }
        } else {
          dist = DisturbanceTriple{};
        }

        const FlatReference ref = eval_reference(sc.trajectory, traj_time(t));
        if (is_fbl) {
          s_ff = snap_feedforward(x.p - ref.p, x.v - ref.v, ref, sc.fbl_gains, dist);
        } else {
          // The baselines consume the estimate like the adaptive one, so the
          // same norm bound applies (guards against pre-convergence spikes).
          DisturbanceTriple d_used = dist;
          const double n = d_used.f.norm();
          if (n > sc.adaptive.bound) {
            d_used.f *= sc.adaptive.bound / n;
            d_used.f_dot *= sc.adaptive.bound / n;
            d_used.f_ddot *= sc.adaptive.bound / n;
          }
          sp = baseline_position_loop(x, ref, sc.cascaded_gains, d_used, g);
        }
      }

      const FlatReference ref_i = eval_reference(sc.trajectory, traj_time(t));
      PlantCommand cmd;
      FblControllerState ctl_next = ctl;
      if (is_fbl) {
        const double alpha_z = yaw_alpha(x, ref_i, sc.fbl_gains);
        const FblCommand fc = fbl_inner_step(x.R, x.omega, s_ff, g, alpha_z, ctl,
                                             sc.fbl_gains, delay_comp, sc.dt_inner);
        cmd = fc.cmd;
        ctl_next = fc.next;
      } else if (sc.controller == ControllerType::cascaded) {
        cmd = cascaded_attitude_loop(x, sp, sc.cascaded_gains);
      } else {
        cmd = reduced_attitude_loop(x, sp, sc.cascaded_gains);
      }

      if (noise) field.offset = sc.wind.offset + noise->step(sc.dt_inner);

      LogRow row;
      row.t = t;
      row.p = x.p;
      row.v = x.v;
      const Eigen::Quaterniond q(x.R.matrix());
      row.q << q.w(), q.x(), q.y(), q.z();
      row.omega = x.omega;
      row.u = x.u;
      row.psi = x.R.yaw();
      row.u_des = cmd.u_des;
      row.u_ctl = u_belief;
      row.alpha = cmd.alpha;
      row.ref_p = ref_i.p;
      row.ref_v = ref_i.v;
      row.ref_psi = ref_i.psi;
      row.f_true = eval_wind(field, x.p, x.v, row.psi);
      if (learned) row.f_hat = dist.f;
      if (sc.compensation == CompensationType::adaptive) row.d_hat = est.d_hat;
      row.sat_u = cmd.u_des < 0.0 || cmd.u_des > sc.plant.u_max ? 1 : 0;
      res.log.push_back(row);

      x = plant_step(x, cmd, sc.plant, field, sc.dt_inner);
      ctl = ctl_next;
      alpha_prev = cmd.alpha;
      u_belief_baseline = std::min(std::max(cmd.u_des, 0.0), sc.plant.u_max);
      t += sc.dt_inner;
    }
  } catch (const std::exception& e) {
    res.completed = false;
    res.abort_reason = e.what();
  }

  res.sim_time = t;
  if (model) {
    res.learner_updates = model->updates_accepted();
    res.learner_rejected = model->updates_rejected();
    res.learner_condition = model->condition_estimate();
    if (!sc.save_model.empty()) model->save(sc.save_model);
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                t_wall0)
                      .count();
  return res;
}

}  // namespace mrsim
