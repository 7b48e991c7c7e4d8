#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mrsim/baselines.hpp"
#include "mrsim/dynamics.hpp"
#include "mrsim/fbl.hpp"
#include "mrsim/learner.hpp"
#include "mrsim/trajectories.hpp"
#include "mrsim/wind.hpp"

namespace mrsim {

/// Flat key = value store with dotted section keys. Lines are
/// `key = value`, blank, or `#` comments; later assignments win.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  /// Applies a `key=value` override (CLI flags take precedence over files).
  void set(const std::string& key_value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;

  /// Keys that were never read by any getter; used to reject typos.
  std::vector<std::string> unused_keys() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

enum class ControllerType { fbl, fbl_no_delay_comp, cascaded, reduced_attitude };
enum class CompensationType { none, adaptive, learned, learned_no_dynamics };

std::string to_string(ControllerType t);
std::string to_string(CompensationType t);

/// Fully resolved scenario description consumed by run_scenario.
struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  double duration = 10.0;      // s
  double dt_inner = 0.002;     // s, plant / attitude-rate step
  double dt_outer = 0.01;      // s, position-feedback / learning step
  int trials = 1;              // repetitions of the trajectory's trial block

  PlantParams plant;
  ControllerType controller = ControllerType::fbl;
  CompensationType compensation = CompensationType::none;
  FblGains fbl_gains;
  CascadedGains cascaded_gains;
  AdaptiveEstimator adaptive;  // parameter carrier; state starts zeroed
  FeatureConfig learner;
  FeatureSet feature_set = FeatureSet::pos_vel;
  /// Accepted updates before the learned estimate is applied (training is
  /// unaffected); bridges the pre-convergence transient at engagement.
  int learner_warmup = 100;
  std::string load_model;
  std::string save_model;

  WindField wind;
  double wind_noise_std = 0.0;        // m/s^2 (0 disables turbulence)
  double wind_noise_bandwidth = 20.0; // rad/s

  Trajectory trajectory = HoverReference{};

  void validate() const;
};

/// Builds a scenario from a parsed config; throws std::invalid_argument on
/// unknown keys, bad enum values or invalid parameter combinations.
ScenarioConfig make_scenario(const Config& cfg);

}  // namespace mrsim
