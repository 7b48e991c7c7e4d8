#include "mrsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mrsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

void Config::set(const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must be key=value: " + key_value);
  values_[trim(key_value.substr(0, eq))] = trim(key_value.substr(eq + 1));
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size())
    throw std::invalid_argument("config key " + key + ": not a number: " + it->second);
  return v;
}

int Config::get_int(const std::string& key, int fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::size_t pos = 0;
  const int v = std::stoi(it->second, &pos);
  if (pos != it->second.size())
    throw std::invalid_argument("config key " + key + ": not an integer: " + it->second);
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw std::invalid_argument("config key " + key + ": not a bool: " + it->second);
}

Vec3 Config::get_vec3(const std::string& key, const Vec3& fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::stringstream ss(it->second);
  Vec3 v;
  std::string cell;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(ss, cell, ','))
      throw std::invalid_argument("config key " + key + ": expected x,y,z");
    v[i] = std::stod(trim(cell));
  }
  if (std::getline(ss, cell, ','))
    throw std::invalid_argument("config key " + key + ": expected exactly 3 values");
  return v;
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

std::string to_string(ControllerType t) {
  switch (t) {
    case ControllerType::fbl: return "fbl";
    case ControllerType::fbl_no_delay_comp: return "fbl-no-delay-comp";
    case ControllerType::cascaded: return "cascaded";
    case ControllerType::reduced_attitude: return "reduced-attitude";
  }
  return "?";
}

std::string to_string(CompensationType t) {
  switch (t) {
    case CompensationType::none: return "none";
    case CompensationType::adaptive: return "adaptive";
    case CompensationType::learned: return "learned";
    case CompensationType::learned_no_dynamics: return "learned-no-dynamics";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (duration <= 0.0 || dt_inner <= 0.0 || dt_outer <= 0.0)
    throw std::invalid_argument("durations and steps must be positive");
  const double ratio = dt_outer / dt_inner;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0)
    throw std::invalid_argument("dt_outer must be an integer multiple of dt_inner");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (plant.tau_u && *plant.tau_u <= 0.0)
    throw std::invalid_argument("plant.tau_u must be positive");
  if (plant.u_max <= 0.0) throw std::invalid_argument("plant.u_max must be positive");
  fbl_gains.validate();
  cascaded_gains.validate();
  if (compensation == CompensationType::learned ||
      compensation == CompensationType::learned_no_dynamics)
    learner.validate();
}

namespace {

ControllerType parse_controller(const std::string& s) {
  if (s == "fbl") return ControllerType::fbl;
  if (s == "fbl-no-delay-comp") return ControllerType::fbl_no_delay_comp;
  if (s == "cascaded") return ControllerType::cascaded;
  if (s == "reduced-attitude") return ControllerType::reduced_attitude;
  throw std::invalid_argument("unknown controller.type: " + s);
}

CompensationType parse_compensation(const std::string& s) {
  if (s == "none") return CompensationType::none;
  if (s == "adaptive") return CompensationType::adaptive;
  if (s == "learned") return CompensationType::learned;
  if (s == "learned-no-dynamics") return CompensationType::learned_no_dynamics;
  throw std::invalid_argument("unknown compensation.type: " + s);
}

WindField::Type parse_wind(const std::string& s) {
  if (s == "none") return WindField::Type::none;
  if (s == "uniform-gust") return WindField::Type::uniform_gust;
  if (s == "position-jet") return WindField::Type::position_jet;
  if (s == "yaw-plate") return WindField::Type::yaw_plate;
  throw std::invalid_argument("unknown wind.type: " + s);
}

Trajectory parse_trajectory(const Config& c) {
  const std::string type = c.get_string("trajectory.type", "hover");
  if (type == "hover") {
    HoverReference t;
    t.p = c.get_vec3("trajectory.hover.position", t.p);
    t.psi = c.get_double("trajectory.hover.yaw", t.psi);
    return t;
  }
  if (type == "step") {
    StepReference t;
    t.p_from = c.get_vec3("trajectory.step.from", t.p_from);
    t.p_to = c.get_vec3("trajectory.step.to", t.p_to);
    t.psi_from = c.get_double("trajectory.step.yaw_from", t.psi_from);
    t.psi_to = c.get_double("trajectory.step.yaw_to", t.psi_to);
    return t;
  }
  if (type == "step-sequence") {
    StepSequence t;
    t.base = c.get_vec3("trajectory.steps.base", t.base);
    t.delta = c.get_vec3("trajectory.steps.delta", t.delta);
    t.psi = c.get_double("trajectory.steps.yaw", t.psi);
    t.period = c.get_double("trajectory.steps.period_s", t.period);
    t.count = c.get_int("trajectory.steps.count", t.count);
    return t;
  }
  if (type == "weave") {
    return WeaveReference(c.get_double("trajectory.weave.max_speed", 2.7),
                          c.get_double("trajectory.weave.max_accel", 5.5),
                          c.get_vec3("trajectory.weave.shape", Vec3(2.0, 1.0, 0.5)),
                          c.get_vec3("trajectory.weave.center", Vec3::Zero()));
  }
  if (type == "yaw-in-place") {
    YawInPlaceReference t;
    t.p = c.get_vec3("trajectory.yaw.position", t.p);
    t.rate = c.get_double("trajectory.yaw.rate_dps", 120.0) * M_PI / 180.0;
    t.revolutions = c.get_double("trajectory.yaw.revolutions", t.revolutions);
    t.hold = c.get_double("trajectory.yaw.hold_s", t.hold);
    return t;
  }
  throw std::invalid_argument("unknown trajectory.type: " + type);
}

}  // namespace

ScenarioConfig make_scenario(const Config& c) {
  ScenarioConfig s;
  s.name = c.get_string("scenario.name", s.name);
  s.seed = static_cast<std::uint64_t>(c.get_int("seed", 1));
  s.duration = c.get_double("duration_s", s.duration);
  s.dt_inner = c.get_double("timing.dt_inner_s", s.dt_inner);
  s.dt_outer = c.get_double("timing.dt_outer_s", s.dt_outer);
  s.trials = c.get_int("trials", s.trials);

  const double gravity = c.get_double("plant.gravity", 9.81);
  s.plant.g = Vec3(0.0, 0.0, -gravity);
  s.plant.u_max = c.get_double("plant.thrust_to_weight", 5.0) * gravity;
  const std::string tau = c.get_string("plant.tau_u", "10");
  if (tau == "none")
    s.plant.tau_u.reset();
  else
    s.plant.tau_u = std::stod(tau);

  s.controller = parse_controller(c.get_string("controller.type", "fbl"));
  s.fbl_gains.tau_u = c.get_double("controller.tau_u", s.fbl_gains.tau_u);
  s.fbl_gains.k1 = c.get_vec3("controller.fbl.k1", s.fbl_gains.k1);
  s.fbl_gains.k2 = c.get_vec3("controller.fbl.k2", s.fbl_gains.k2);
  s.fbl_gains.k3 = c.get_double("controller.fbl.k3", s.fbl_gains.k3);
  s.fbl_gains.k4 = c.get_double("controller.fbl.k4", s.fbl_gains.k4);
  s.fbl_gains.k_yaw = c.get_double("controller.fbl.k_yaw", s.fbl_gains.k_yaw);
  s.fbl_gains.k_yaw_rate = c.get_double("controller.fbl.k_yaw_rate", s.fbl_gains.k_yaw_rate);
  s.fbl_gains.u_min = c.get_double("controller.fbl.u_min", s.fbl_gains.u_min);
  s.cascaded_gains.kp = c.get_vec3("controller.cascaded.kp", s.cascaded_gains.kp);
  s.cascaded_gains.kv = c.get_vec3("controller.cascaded.kv", s.cascaded_gains.kv);
  s.cascaded_gains.ktheta = c.get_vec3("controller.cascaded.ktheta", s.cascaded_gains.ktheta);
  s.cascaded_gains.komega = c.get_vec3("controller.cascaded.komega", s.cascaded_gains.komega);
  s.cascaded_gains.u_min = c.get_double("controller.cascaded.u_min", s.cascaded_gains.u_min);

  s.compensation = parse_compensation(c.get_string("compensation.type", "none"));
  s.adaptive.gamma = c.get_double("adaptive.gamma", s.adaptive.gamma);
  s.adaptive.omega_f = c.get_double("adaptive.omega_f", s.adaptive.omega_f);
  s.adaptive.bound = c.get_double("adaptive.bound", s.adaptive.bound);
  s.adaptive.g = s.plant.g;

  s.feature_set = c.get_bool("learner.yaw_features", false) ? FeatureSet::pos_vel_yaw
                                                            : FeatureSet::pos_vel;
  s.learner.num_frequencies = c.get_int("learner.num_frequencies", 50);
  s.learner.lambda = c.get_double("learner.lambda", 1e-3);
  s.learner.seed = s.seed;
  s.learner.outlier_threshold = c.get_double("learner.outlier_threshold", 30.0);
  s.learner_warmup = c.get_int("learner.warmup_updates", s.learner_warmup);
  const double ls_pv = c.get_double("learner.length_scale_posvel", 1.0);
  const double ls_yaw = c.get_double("learner.length_scale_yaw", 0.5);
  const int d = s.feature_set == FeatureSet::pos_vel_yaw ? 8 : 6;
  s.learner.length_scales = Eigen::VectorXd::Constant(d, ls_pv);
  if (d == 8) s.learner.length_scales.tail<2>().setConstant(ls_yaw);
  s.load_model = c.get_string("learner.load_model", "");
  s.save_model = c.get_string("learner.save_model", "");

  s.wind.type = parse_wind(c.get_string("wind.type", "none"));
  s.wind.peak = c.get_vec3("wind.peak", s.wind.peak);
  s.wind.center = c.get_vec3("wind.center", s.wind.center);
  s.wind.width = c.get_vec3("wind.width", s.wind.width);
  s.wind.drag = c.get_double("wind.drag", s.wind.drag);
  s.wind.psi0 = c.get_double("wind.psi0", s.wind.psi0);
  s.wind.f_max = c.get_double("wind.f_max", s.wind.f_max);
  s.wind_noise_std = c.get_double("wind.noise_std", s.wind_noise_std);
  s.wind_noise_bandwidth = c.get_double("wind.noise_bandwidth", s.wind_noise_bandwidth);

  s.trajectory = parse_trajectory(c);

  const auto unused = c.unused_keys();
  if (!unused.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unused) msg += " " + k;
    throw std::invalid_argument(msg);
  }
  s.validate();
  return s;
}

}  // namespace mrsim
