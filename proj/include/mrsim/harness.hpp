#pragma once

#include <string>
#include <vector>

#include "mrsim/config.hpp"

namespace mrsim {

/// One record per inner step. Rows are appended before the plant advances, so
/// state, reference, command and disturbance columns all refer to the same
/// instant; timestamps are strictly increasing at dt_inner.
struct LogRow {
  double t = 0.0;                // s
  Vec3 p = Vec3::Zero();         // m
  Vec3 v = Vec3::Zero();         // m/s
  Eigen::Vector4d q = Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);  // attitude, wxyz
  Vec3 omega = Vec3::Zero();     // rad/s, body
  double u = 0.0;                // m/s^2, realized thrust
  double psi = 0.0;              // rad, heading
  double u_des = 0.0;            // m/s^2, commanded thrust
  double u_ctl = 0.0;            // m/s^2, controller's thrust belief
  Vec3 alpha = Vec3::Zero();     // rad/s^2, commanded body angular accel
  Vec3 ref_p = Vec3::Zero();     // m
  Vec3 ref_v = Vec3::Zero();     // m/s
  double ref_psi = 0.0;          // rad
  Vec3 f_true = Vec3::Zero();    // m/s^2, disturbance field at the state
  Vec3 f_hat = Vec3::Zero();     // m/s^2, learned-model prediction in use
  Vec3 d_hat = Vec3::Zero();     // m/s^2, adaptive estimate in use
  int sat_u = 0;                 // 1 when u_des exceeded the plant limits
};

struct RunResult {
  std::vector<LogRow> log;
  bool completed = true;
  std::string abort_reason;      // empty when completed
  double wall_time = 0.0;        // s
  double sim_time = 0.0;         // s actually simulated
  long learner_updates = 0;
  long learner_rejected = 0;
  double learner_condition = 0.0;
  /// Aggregation-window start handed to the metrics stage: the first trial
  /// is excluded whenever the scenario repeats its trial block.
  double metrics_start = 0.0;    // s
  double rev_period = 0.0;       // s, segment length for per-revolution stats
};

/// Simulated span: trials x trial block for repeating trajectories, the
/// configured duration otherwise.
double scenario_duration(const ScenarioConfig& sc);

/// Hover-consistent state on the reference's initial pose (position, velocity
/// and heading from the pre-start reference, thrust canceling gravity).
VehicleState scenario_initial_state(const ScenarioConfig& sc);

/// Two-rate closed-loop simulation. The outer rate (dt_outer) refreshes
/// position feedback, the disturbance estimate (adaptive update or learner
/// training + triple evaluation) and the held feedforward; the inner rate
/// (dt_inner) runs the attitude/thrust laws and steps the plant. Controller
/// exceptions abort the run, returning the partial log and the reason.
RunResult run_scenario(const ScenarioConfig& sc);

}  // namespace mrsim
