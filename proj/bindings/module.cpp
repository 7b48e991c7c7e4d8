// Python bindings for the multirotor simulator and controller library.
// Exposes the geometry helpers, the plant, the disturbance learner, the
// controllers and the scenario harness so runs can be scripted and their
// logs analyzed from Python.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "mrsim/baselines.hpp"
#include "mrsim/config.hpp"
#include "mrsim/csv_io.hpp"
#include "mrsim/dynamics.hpp"
#include "mrsim/fbl.hpp"
#include "mrsim/geometry.hpp"
#include "mrsim/harness.hpp"
#include "mrsim/learner.hpp"
#include "mrsim/metrics.hpp"
#include "mrsim/trajectories.hpp"
#include "mrsim/types.hpp"
#include "mrsim/wind.hpp"

namespace py = pybind11;
using namespace mrsim;

namespace {

ScenarioConfig scenario_from_config(Config cfg, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) cfg.set(kv);
  return make_scenario(cfg);
}

/// Log rows flattened to an (n, 38) matrix in run_csv_columns() order.
Eigen::MatrixXd log_matrix(const std::vector<LogRow>& log) {
  const auto n = static_cast<Eigen::Index>(log.size());
  Eigen::MatrixXd m(n, 38);
  for (Eigen::Index r = 0; r < n; ++r) {
    const LogRow& row = log[static_cast<std::size_t>(r)];
    Eigen::Index k = 0;
    m(r, k++) = row.t;
    for (int i = 0; i < 3; ++i) m(r, k++) = row.p[i];
    for (int i = 0; i < 3; ++i) m(r, k++) = row.v[i];
    for (int i = 0; i < 4; ++i) m(r, k++) = row.q[i];
    for (int i = 0; i < 3; ++i) m(r, k++) = row.omega[i];
    m(r, k++) = row.u;
    m(r, k++) = row.psi;
    m(r, k++) = row.u_des;
    m(r, k++) = row.u_ctl;
    for (int i = 0; i < 3; ++i) m(r, k++) = row.alpha[i];
    for (int i = 0; i < 3; ++i) m(r, k++) = row.ref_p[i];
    for (int i = 0; i < 3; ++i) m(r, k++) = row.ref_v[i];
    m(r, k++) = row.ref_psi;
    for (int i = 0; i < 3; ++i) m(r, k++) = row.f_true[i];
    for (int i = 0; i < 3; ++i) m(r, k++) = row.f_hat[i];
    for (int i = 0; i < 3; ++i) m(r, k++) = row.d_hat[i];
    m(r, k++) = row.sat_u;
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multirotor flight-dynamics simulator, controllers and scenario harness";
  m.attr("__version__") = "0.1.0";

  // ---------------------------------------------------------------- geometry
  m.def("hat", &hat, py::arg("v"),
        "Skew-symmetric matrix: hat(v) @ w == cross(v, w)");
  m.def("vee", &vee, py::arg("m"), "Inverse of hat() for skew-symmetric matrices");
  m.def("wrap_angle", &wrap_angle, py::arg("a"), "Wraps an angle to (-pi, pi]");
  m.def("orthonormalized", &orthonormalized, py::arg("m"),
        "Nearest rotation matrix to m (Newton polar iteration)");

  py::class_<Rotation>(m, "Rotation",
                       "Body-to-world rotation with enforced orthonormality")
      .def(py::init<>())
      .def_static("identity", &Rotation::identity)
      .def_static("from_matrix", &Rotation::from_matrix, py::arg("m"),
                  "Re-polishes a near-orthonormal matrix; raises ValueError otherwise")
      .def_static("exp", &Rotation::exp, py::arg("phi"),
                  "Exponential map so(3) -> SO(3)")
      .def("matrix", &Rotation::matrix, py::return_value_policy::copy)
      .def("col", &Rotation::col, py::arg("i"))
      .def("z", &Rotation::z, "Body z-axis in world coordinates (thrust direction)")
      .def("rotate", &Rotation::rotate, py::arg("v"))
      .def("unrotate", &Rotation::unrotate, py::arg("v"))
      .def("transposed", &Rotation::transposed)
      .def("yaw", &Rotation::yaw,
           "Heading: atan2 of the body x-axis projected to the world xy-plane")
      .def("__mul__", &Rotation::operator*, py::arg("other"))
      .def("__repr__", [](const Rotation& r) {
        std::ostringstream os;
        os << "Rotation(yaw=" << r.yaw() << ")";
        return os.str();
      });

  m.def("integrate_rotation", &integrate_rotation, py::arg("r"), py::arg("omega"),
        py::arg("dt"), "r * exp(omega * dt), re-orthonormalized");

  // ------------------------------------------------------------------- types
  py::class_<DisturbanceTriple>(m, "DisturbanceTriple",
                                "Disturbance acceleration and its first two time "
                                "derivatives, as supplied to the controllers")
      .def(py::init<>())
      .def_readwrite("f", &DisturbanceTriple::f)
      .def_readwrite("f_dot", &DisturbanceTriple::f_dot)
      .def_readwrite("f_ddot", &DisturbanceTriple::f_ddot);

  // -------------------------------------------------------------------- wind
  py::class_<WindField> wind_field(m, "WindField",
                                   "Synthetic acceleration-disturbance field");
  py::enum_<WindField::Type>(wind_field, "Type")
      .value("none", WindField::Type::none)
      .value("uniform_gust", WindField::Type::uniform_gust)
      .value("position_jet", WindField::Type::position_jet)
      .value("yaw_plate", WindField::Type::yaw_plate);
  wind_field.def(py::init<>())
      .def_readwrite("type", &WindField::type)
      .def_readwrite("peak", &WindField::peak)
      .def_readwrite("center", &WindField::center)
      .def_readwrite("width", &WindField::width)
      .def_readwrite("drag", &WindField::drag)
      .def_readwrite("psi0", &WindField::psi0)
      .def_readwrite("f_max", &WindField::f_max)
      .def_readwrite("offset", &WindField::offset);

  m.def("eval_wind", &eval_wind, py::arg("field"), py::arg("p"), py::arg("v"),
        py::arg("psi"), "Disturbance acceleration at a position/velocity/heading");

  py::class_<TurbulenceNoise>(m, "TurbulenceNoise",
                              "First-order Gauss-Markov turbulence noise")
      .def(py::init<double, double, std::uint64_t>(), py::arg("sigma"),
           py::arg("omega_n"), py::arg("seed"))
      .def("step", &TurbulenceNoise::step, py::arg("dt"),
           "Advances the process by dt and returns the new value")
      .def_property_readonly("value", &TurbulenceNoise::value);

  // ---------------------------------------------------------------- dynamics
  py::class_<VehicleState>(m, "VehicleState", "Full simulator state")
      .def(py::init<>())
      .def_readwrite("p", &VehicleState::p)
      .def_readwrite("v", &VehicleState::v)
      .def_readwrite("R", &VehicleState::R)
      .def_readwrite("omega", &VehicleState::omega)
      .def_readwrite("u", &VehicleState::u);

  py::class_<PlantCommand>(m, "PlantCommand",
                           "Collective-thrust setpoint and body angular acceleration")
      .def(py::init<>())
      .def_readwrite("u_des", &PlantCommand::u_des)
      .def_readwrite("alpha", &PlantCommand::alpha);

  py::class_<PlantParams>(m, "PlantParams")
      .def(py::init<>())
      .def_readwrite("tau_u", &PlantParams::tau_u,
                     "First-order thrust-lag rate (1/s); None disables the lag")
      .def_readwrite("u_max", &PlantParams::u_max)
      .def_readwrite("g", &PlantParams::g);

  py::class_<StateDerivative>(m, "StateDerivative")
      .def_readonly("p_dot", &StateDerivative::p_dot)
      .def_readonly("v_dot", &StateDerivative::v_dot)
      .def_readonly("omega", &StateDerivative::omega)
      .def_readonly("omega_dot", &StateDerivative::omega_dot)
      .def_readonly("u_dot", &StateDerivative::u_dot);

  m.def("plant_derivative", &plant_derivative, py::arg("x"), py::arg("cmd"),
        py::arg("params"), py::arg("wind"),
        "Continuous-time dynamics at the given state and (clamped) command");
  m.def("plant_step", &plant_step, py::arg("x"), py::arg("cmd"), py::arg("params"),
        py::arg("wind"), py::arg("dt"),
        "Advances the state by dt (RK4 translation, exact attitude increment)");
  m.def("hover_thrust", &hover_thrust, py::arg("x"), py::arg("params"), py::arg("f_e"),
        "Thrust canceling gravity and f_e along the current body z-axis");

  // ------------------------------------------------------------ trajectories
  py::class_<FlatReference>(m, "FlatReference",
                            "Position/heading reference with snap-level derivatives")
      .def(py::init<>())
      .def_readwrite("p", &FlatReference::p)
      .def_readwrite("v", &FlatReference::v)
      .def_readwrite("a", &FlatReference::a)
      .def_readwrite("j", &FlatReference::j)
      .def_readwrite("s", &FlatReference::s)
      .def_readwrite("psi", &FlatReference::psi)
      .def_readwrite("psi_dot", &FlatReference::psi_dot)
      .def_readwrite("psi_ddot", &FlatReference::psi_ddot);

  py::class_<HoverReference>(m, "HoverReference", "Constant pose hold")
      .def(py::init<>())
      .def_readwrite("p", &HoverReference::p)
      .def_readwrite("psi", &HoverReference::psi);

  py::class_<StepReference>(m, "StepReference",
                            "Instantaneous setpoint change at t = 0")
      .def(py::init<>())
      .def_readwrite("p_from", &StepReference::p_from)
      .def_readwrite("psi_from", &StepReference::psi_from)
      .def_readwrite("p_to", &StepReference::p_to)
      .def_readwrite("psi_to", &StepReference::psi_to);

  py::class_<StepSequence>(m, "StepSequence",
                           "Alternating square-wave setpoint: base <-> base + delta")
      .def(py::init<>())
      .def_readwrite("base", &StepSequence::base)
      .def_readwrite("delta", &StepSequence::delta)
      .def_readwrite("psi", &StepSequence::psi)
      .def_readwrite("period", &StepSequence::period)
      .def_readwrite("count", &StepSequence::count);

  py::class_<WeaveReference>(m, "WeaveReference",
                             "Lissajous sweep rescaled to exact speed/acceleration "
                             "envelopes")
      .def(py::init<double, double, const Vec3&, const Vec3&>(), py::arg("max_speed"),
           py::arg("max_accel"), py::arg("shape") = Vec3(2.0, 1.0, 0.5),
           py::arg("center") = Vec3::Zero())
      .def("at", &WeaveReference::at, py::arg("t"))
      .def_property_readonly("period", &WeaveReference::period)
      .def_property_readonly("amplitude", &WeaveReference::amplitude)
      .def_property_readonly("rate", &WeaveReference::rate);

  py::class_<YawInPlaceReference>(m, "YawInPlaceReference",
                                  "Fixed position, ramping heading, then hold")
      .def(py::init<>())
      .def_readwrite("p", &YawInPlaceReference::p)
      .def_readwrite("rate", &YawInPlaceReference::rate)
      .def_readwrite("revolutions", &YawInPlaceReference::revolutions)
      .def_readwrite("hold", &YawInPlaceReference::hold);

  m.def("eval_reference", &eval_reference, py::arg("trajectory"), py::arg("t"),
        "Evaluates the reference at time t (t < 0 clamps to the initial pose)");
  m.def("revolution_period", &revolution_period, py::arg("trajectory"),
        "Natural segment length for per-revolution metrics (0 when meaningless)");
  m.def("trial_duration", &trial_duration, py::arg("trajectory"),
        "Length of one repeating trial block (0 if the trajectory does not repeat)");

  // ----------------------------------------------------------------- learner
  py::class_<FeatureConfig>(m, "FeatureConfig",
                            "Random-Fourier-feature disturbance-model configuration")
      .def(py::init<>())
      .def(py::init([](int n, const Eigen::VectorXd& ls, double lambda,
                       std::uint64_t seed, double outlier) {
             FeatureConfig cfg;
             cfg.num_frequencies = n;
             cfg.length_scales = ls;
             cfg.lambda = lambda;
             cfg.seed = seed;
             cfg.outlier_threshold = outlier;
             return cfg;
           }),
           py::arg("num_frequencies"), py::arg("length_scales"),
           py::arg("lambda_") = 1e-3, py::arg("seed") = 1,
           py::arg("outlier_threshold") = 30.0)
      .def_readwrite("num_frequencies", &FeatureConfig::num_frequencies)
      .def_readwrite("length_scales", &FeatureConfig::length_scales)
      .def_readwrite("lambda_", &FeatureConfig::lambda, "Ridge regularizer")
      .def_readwrite("seed", &FeatureConfig::seed)
      .def_readwrite("outlier_threshold", &FeatureConfig::outlier_threshold)
      .def_property_readonly("input_dim", &FeatureConfig::input_dim)
      .def("validate", &FeatureConfig::validate);

  m.def("make_features", &make_features, py::arg("config"),
        "Draws the N x d frequency matrix for a configuration");

  py::class_<TrainingPair>(m, "TrainingPair")
      .def(py::init([](const Eigen::VectorXd& xi, const Vec3& y) {
             return TrainingPair{xi, y};
           }),
           py::arg("xi"), py::arg("y"))
      .def_readwrite("xi", &TrainingPair::xi)
      .def_readwrite("y", &TrainingPair::y);

  py::class_<DisturbanceModel>(m, "DisturbanceModel",
                               "Online ridge regression on sparse random Fourier "
                               "features; weights always equal the batch solution "
                               "over all accepted pairs")
      .def(py::init<const FeatureConfig&>(), py::arg("config"))
      .def("phi", &DisturbanceModel::phi, py::arg("xi"),
           "Raw feature vector [cos(W xi); sin(W xi)] of size 2N")
      .def("update",
           py::overload_cast<const TrainingPair&>(&DisturbanceModel::update),
           py::arg("pair"),
           "Incorporates one training pair; False when rejected as an outlier")
      .def("update",
           [](DisturbanceModel& self, const Eigen::VectorXd& xi, const Vec3& y) {
             return self.update(TrainingPair{xi, y});
           },
           py::arg("xi"), py::arg("y"))
      .def("predict", &DisturbanceModel::predict, py::arg("xi"),
           "Predicted disturbance; exactly zero before the first accepted update")
      .def("predict_jacobian", &DisturbanceModel::predict_jacobian, py::arg("xi"),
           "d f_e / d xi, 3 x d")
      .def("predict_hessian", &DisturbanceModel::predict_hessian, py::arg("xi"),
           "Per-output-row Hessians, list of three d x d matrices")
      .def("disturbance_triple", &DisturbanceModel::disturbance_triple,
           py::arg("xi"), py::arg("xi_dot"), py::arg("xi_ddot"),
           "f_e and its first two time derivatives along a state path")
      .def_property_readonly("frequencies", &DisturbanceModel::frequencies)
      .def_property_readonly("weights", &DisturbanceModel::weights)
      .def_property_readonly("config", &DisturbanceModel::config)
      .def_property_readonly("updates_accepted", &DisturbanceModel::updates_accepted)
      .def_property_readonly("updates_rejected", &DisturbanceModel::updates_rejected)
      .def("condition_estimate", &DisturbanceModel::condition_estimate,
           "Lower bound on the information-matrix condition number")
      .def("save", &DisturbanceModel::save, py::arg("path"))
      .def_static("load", &DisturbanceModel::load, py::arg("path"));

  py::enum_<FeatureSet>(m, "FeatureSet")
      .value("pos_vel", FeatureSet::pos_vel)
      .value("pos_vel_yaw", FeatureSet::pos_vel_yaw);

  py::class_<LearnerSample>(m, "LearnerSample",
                            "One outer-rate feedback sample for pair building")
      .def(py::init<>())
      .def_readwrite("p", &LearnerSample::p)
      .def_readwrite("v", &LearnerSample::v)
      .def_readwrite("z", &LearnerSample::z)
      .def_readwrite("u", &LearnerSample::u)
      .def_readwrite("psi", &LearnerSample::psi);

  m.def("make_input", &make_input, py::arg("p"), py::arg("v"), py::arg("psi"),
        py::arg("feature_set"),
        "Model input (p, v) optionally extended with (sin psi, cos psi)");
  m.def("build_pair", &build_pair, py::arg("prev"), py::arg("cur"), py::arg("dt"),
        py::arg("feature_set"), py::arg("g"),
        "Training pair from two consecutive samples dt apart");

  // ------------------------------------------------------------- controllers
  py::register_exception<ThrustSingularity>(m, "ThrustSingularity",
                                            PyExc_RuntimeError);

  py::class_<FblGains>(m, "FblGains", "Gains of the snap-level linearizing controller")
      .def(py::init<>())
      .def_readwrite("k1", &FblGains::k1)
      .def_readwrite("k2", &FblGains::k2)
      .def_readwrite("k3", &FblGains::k3)
      .def_readwrite("k4", &FblGains::k4)
      .def_readwrite("tau_u", &FblGains::tau_u)
      .def_readwrite("k_yaw", &FblGains::k_yaw)
      .def_readwrite("k_yaw_rate", &FblGains::k_yaw_rate)
      .def_readwrite("u_min", &FblGains::u_min)
      .def("validate", &FblGains::validate);

  py::class_<FblControllerState>(m, "FblControllerState",
                                 "Internal thrust states of the dynamic extension")
      .def(py::init<>())
      .def_readwrite("u", &FblControllerState::u)
      .def_readwrite("u_des", &FblControllerState::u_des)
      .def_readwrite("u_dot", &FblControllerState::u_dot);

  m.def("fbl_hover_state", &fbl_hover_state, py::arg("x"), py::arg("g"), py::arg("f_e"),
        "Hover-consistent controller state for engagement at x");

  py::class_<AccelJerk>(m, "AccelJerk")
      .def_readonly("a", &AccelJerk::a)
      .def_readonly("j", &AccelJerk::j);

  m.def("feedback_acc_jerk", &feedback_acc_jerk, py::arg("x"), py::arg("ctl"),
        py::arg("d"), py::arg("g"),
        "Acceleration/jerk reconstruction from thrust states and disturbance model");
  m.def("snap_feedforward", &snap_feedforward, py::arg("p_err"), py::arg("v_err"),
        py::arg("ref"), py::arg("gains"), py::arg("d"),
        "Snap feedforward held between position-feedback updates");

  py::class_<FblCommand>(m, "FblCommand")
      .def_readonly("cmd", &FblCommand::cmd)
      .def_readonly("next", &FblCommand::next);

  m.def("fbl_inner_step", &fbl_inner_step, py::arg("R"), py::arg("omega"),
        py::arg("s_ff"), py::arg("g"), py::arg("alpha_z"), py::arg("ctl"),
        py::arg("gains"), py::arg("delay_comp"), py::arg("dt"),
        "Inner-rate body law; advances the extension states by dt");
  m.def("yaw_alpha", &yaw_alpha, py::arg("x"), py::arg("ref"), py::arg("gains"),
        "Heading loop: angular acceleration about the body z-axis");
  m.def("fbl_control", &fbl_control, py::arg("x"), py::arg("ctl"), py::arg("ref"),
        py::arg("d"), py::arg("gains"), py::arg("g"), py::arg("delay_comp"),
        py::arg("dt"), "Single-rate composition of the full linearizing controller");

  py::class_<CascadedGains>(m, "CascadedGains",
                            "Gains of the cascaded position -> attitude controllers")
      .def(py::init<>())
      .def_readwrite("kp", &CascadedGains::kp)
      .def_readwrite("kv", &CascadedGains::kv)
      .def_readwrite("ktheta", &CascadedGains::ktheta)
      .def_readwrite("komega", &CascadedGains::komega)
      .def_readwrite("u_min", &CascadedGains::u_min)
      .def("validate", &CascadedGains::validate);

  py::class_<AttitudeSetpoint>(m, "AttitudeSetpoint",
                               "Position-loop output: thrust vector, attitude, "
                               "rate/acceleration feedforward")
      .def(py::init<>())
      .def_readwrite("h", &AttitudeSetpoint::h)
      .def_readwrite("R_d", &AttitudeSetpoint::R_d)
      .def_readwrite("omega_d", &AttitudeSetpoint::omega_d)
      .def_readwrite("alpha_d", &AttitudeSetpoint::alpha_d);

  m.def("baseline_position_loop", &baseline_position_loop, py::arg("x"),
        py::arg("ref"), py::arg("gains"), py::arg("d"), py::arg("g"));
  m.def("cascaded_attitude_loop", &cascaded_attitude_loop, py::arg("x"), py::arg("sp"),
        py::arg("gains"), "Attitude loop with the full rotation error");
  m.def("reduced_attitude_loop", &reduced_attitude_loop, py::arg("x"), py::arg("sp"),
        py::arg("gains"),
        "Attitude loop splitting thrust-axis geodesic from the heading twist");
  m.def("cascaded_control", &cascaded_control, py::arg("x"), py::arg("ref"),
        py::arg("gains"), py::arg("d"), py::arg("g"));
  m.def("reduced_attitude_control", &reduced_attitude_control, py::arg("x"),
        py::arg("ref"), py::arg("gains"), py::arg("d"), py::arg("g"));

  py::class_<AdaptiveEstimator>(m, "AdaptiveEstimator",
                                "Finite-difference disturbance estimator with a "
                                "low-pass published estimate")
      .def(py::init<>())
      .def_readwrite("gamma", &AdaptiveEstimator::gamma)
      .def_readwrite("omega_f", &AdaptiveEstimator::omega_f)
      .def_readwrite("bound", &AdaptiveEstimator::bound)
      .def_readwrite("g", &AdaptiveEstimator::g)
      .def_readwrite("d_hat", &AdaptiveEstimator::d_hat)
      .def_readwrite("raw", &AdaptiveEstimator::raw)
      .def_readwrite("primed", &AdaptiveEstimator::primed)
      .def_readwrite("v_prev", &AdaptiveEstimator::v_prev)
      .def_readwrite("model_acc_prev", &AdaptiveEstimator::model_acc_prev);

  m.def("adaptive_update", &adaptive_update, py::arg("est"), py::arg("x"),
        py::arg("u_applied"), py::arg("dt"),
        "Advances the estimator with a velocity sample; returns the new estimator");

  // ---------------------------------------------------------------- scenario
  py::enum_<ControllerType>(m, "ControllerType")
      .value("fbl", ControllerType::fbl)
      .value("fbl_no_delay_comp", ControllerType::fbl_no_delay_comp)
      .value("cascaded", ControllerType::cascaded)
      .value("reduced_attitude", ControllerType::reduced_attitude);

  py::enum_<CompensationType>(m, "CompensationType")
      .value("none", CompensationType::none)
      .value("adaptive", CompensationType::adaptive)
      .value("learned", CompensationType::learned)
      .value("learned_no_dynamics", CompensationType::learned_no_dynamics);

  py::class_<ScenarioConfig>(m, "ScenarioConfig",
                             "Fully resolved scenario description")
      .def(py::init<>())
      .def_readwrite("name", &ScenarioConfig::name)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("duration", &ScenarioConfig::duration)
      .def_readwrite("dt_inner", &ScenarioConfig::dt_inner)
      .def_readwrite("dt_outer", &ScenarioConfig::dt_outer)
      .def_readwrite("trials", &ScenarioConfig::trials)
      .def_readwrite("plant", &ScenarioConfig::plant)
      .def_readwrite("controller", &ScenarioConfig::controller)
      .def_readwrite("compensation", &ScenarioConfig::compensation)
      .def_readwrite("fbl_gains", &ScenarioConfig::fbl_gains)
      .def_readwrite("cascaded_gains", &ScenarioConfig::cascaded_gains)
      .def_readwrite("adaptive", &ScenarioConfig::adaptive)
      .def_readwrite("learner", &ScenarioConfig::learner)
      .def_readwrite("feature_set", &ScenarioConfig::feature_set)
      .def_readwrite("learner_warmup", &ScenarioConfig::learner_warmup)
      .def_readwrite("load_model", &ScenarioConfig::load_model)
      .def_readwrite("save_model", &ScenarioConfig::save_model)
      .def_readwrite("wind", &ScenarioConfig::wind)
      .def_readwrite("wind_noise_std", &ScenarioConfig::wind_noise_std)
      .def_readwrite("wind_noise_bandwidth", &ScenarioConfig::wind_noise_bandwidth)
      .def_readwrite("trajectory", &ScenarioConfig::trajectory)
      .def("validate", &ScenarioConfig::validate);

  m.def(
      "load_scenario",
      [](const std::string& path, const std::vector<std::string>& overrides) {
        return scenario_from_config(Config::from_file(path), overrides);
      },
      py::arg("path"), py::arg("overrides") = std::vector<std::string>{},
      "Scenario from a key = value config file plus key=value overrides");
  m.def(
      "scenario_from_string",
      [](const std::string& text, const std::vector<std::string>& overrides) {
        return scenario_from_config(Config::from_string(text), overrides);
      },
      py::arg("text"), py::arg("overrides") = std::vector<std::string>{},
      "Scenario from config text plus key=value overrides");

  // ----------------------------------------------------------------- harness
  py::class_<LogRow>(m, "LogRow", "One record per inner step (pre-step state)")
      .def(py::init<>())
      .def_readwrite("t", &LogRow::t)
      .def_readwrite("p", &LogRow::p)
      .def_readwrite("v", &LogRow::v)
      .def_readwrite("q", &LogRow::q)
      .def_readwrite("omega", &LogRow::omega)
      .def_readwrite("u", &LogRow::u)
      .def_readwrite("psi", &LogRow::psi)
      .def_readwrite("u_des", &LogRow::u_des)
      .def_readwrite("u_ctl", &LogRow::u_ctl)
      .def_readwrite("alpha", &LogRow::alpha)
      .def_readwrite("ref_p", &LogRow::ref_p)
      .def_readwrite("ref_v", &LogRow::ref_v)
      .def_readwrite("ref_psi", &LogRow::ref_psi)
      .def_readwrite("f_true", &LogRow::f_true)
      .def_readwrite("f_hat", &LogRow::f_hat)
      .def_readwrite("d_hat", &LogRow::d_hat)
      .def_readwrite("sat_u", &LogRow::sat_u);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("log", &RunResult::log, "Full log as a list of LogRow copies")
      .def_readonly("completed", &RunResult::completed)
      .def_readonly("abort_reason", &RunResult::abort_reason)
      .def_readonly("wall_time", &RunResult::wall_time)
      .def_readonly("sim_time", &RunResult::sim_time)
      .def_readonly("learner_updates", &RunResult::learner_updates)
      .def_readonly("learner_rejected", &RunResult::learner_rejected)
      .def_readonly("learner_condition", &RunResult::learner_condition)
      .def_readonly("metrics_start", &RunResult::metrics_start)
      .def_readonly("rev_period", &RunResult::rev_period)
      .def("log_matrix", [](const RunResult& r) { return log_matrix(r.log); },
           "Log flattened to an (n, 38) array in run_csv_columns() order")
      .def("__len__", [](const RunResult& r) { return r.log.size(); });

  m.def("scenario_duration", &scenario_duration, py::arg("scenario"),
        "Simulated span: trials x trial block for repeating trajectories");
  m.def("scenario_initial_state", &scenario_initial_state, py::arg("scenario"),
        "Hover-consistent state on the reference's initial pose");
  m.def("run_scenario", &run_scenario, py::arg("scenario"),
        py::call_guard<py::gil_scoped_release>(),
        "Two-rate closed-loop simulation of a scenario");

  // ----------------------------------------------------------------- metrics
  py::class_<MetricsSummary>(m, "MetricsSummary",
                             "Scalar statistics, smoothed error series and "
                             "per-revolution means")
      .def_readonly("samples", &MetricsSummary::samples)
      .def_readonly("t_begin", &MetricsSummary::t_begin)
      .def_readonly("t_end", &MetricsSummary::t_end)
      .def_readonly("mean_pos_err", &MetricsSummary::mean_pos_err)
      .def_readonly("max_pos_err", &MetricsSummary::max_pos_err)
      .def_readonly("mean_speed", &MetricsSummary::mean_speed)
      .def_readonly("max_excursion", &MetricsSummary::max_excursion)
      .def_readonly("alt_peak_err", &MetricsSummary::alt_peak_err)
      .def_readonly("alt_zero_crossings", &MetricsSummary::alt_zero_crossings)
      .def_readonly("smoothed_t", &MetricsSummary::smoothed_t)
      .def_readonly("smoothed_err", &MetricsSummary::smoothed_err)
      .def_readonly("per_rev_err", &MetricsSummary::per_rev_err)
      .def_readonly("window", &MetricsSummary::window)
      .def_readonly("deadband", &MetricsSummary::deadband);

  m.def(
      "compute_metrics",
      [](const RunResult& res, double window, double deadband) {
        return compute_metrics(res.log, res.rev_period, res.metrics_start, window,
                               deadband);
      },
      py::arg("result"), py::arg("window") = 0.5, py::arg("deadband") = 0.005,
      "Metrics of a run over its own aggregation window and segment length");
  m.def("compute_metrics",
        py::overload_cast<const std::vector<LogRow>&, double, double, double, double>(
            &compute_metrics),
        py::arg("log"), py::arg("rev_period"), py::arg("t_start") = 0.0,
        py::arg("window") = 0.5, py::arg("deadband") = 0.005,
        "Metrics over an explicit log, segment length and window start");

  // --------------------------------------------------------------------- io
  m.def("run_csv_columns", []() { return run_csv_columns(); },
        "Log-file column names (unit-suffixed), in file order");
  m.def("write_run_csv", &write_run_csv, py::arg("path"), py::arg("log"),
        "RFC-4180 CSV, one row per record, 9 significant digits");
  m.def(
      "write_run_csv",
      [](const std::string& path, const RunResult& res) {
        write_run_csv(path, res.log);
      },
      py::arg("path"), py::arg("result"));
  m.def("read_run_csv", &read_run_csv, py::arg("path"),
        "Parses a file written by write_run_csv (header-validated)");
  m.def("format_summary", &format_summary, py::arg("scenario"), py::arg("result"),
        py::arg("metrics"), "Human-readable, deterministic run summary");
}
