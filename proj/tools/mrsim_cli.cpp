#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrsim/csv_io.hpp"
#include "mrsim/harness.hpp"
#include "mrsim/metrics.hpp"

namespace {

mrsim::ScenarioConfig load_scenario(const std::string& path,
                                    const std::vector<std::string>& overrides) {
  mrsim::Config cfg = mrsim::Config::from_file(path);
  for (const auto& kv : overrides) cfg.set(kv);
  return mrsim::make_scenario(cfg);
}

/// Runs one scenario and writes run.csv + summary.txt under out_dir.
/// Returns true when the run completed without an abort.
bool run_one(const mrsim::ScenarioConfig& sc, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const mrsim::RunResult res = mrsim::run_scenario(sc);
  mrsim::write_run_csv(out_dir + "/run.csv", res.log);
  std::string text = "(no rows logged)\n";
  if (!res.log.empty()) {
    // A partial log may end before the nominal aggregation window opens.
    const double t_start =
        res.log.back().t >= res.metrics_start ? res.metrics_start : 0.0;
    const mrsim::MetricsSummary m =
        mrsim::compute_metrics(res.log, res.rev_period, t_start);
    text = mrsim::format_summary(sc, res, m);
  }
  mrsim::write_text(out_dir + "/summary.txt", text);
  std::fputs(text.c_str(), stdout);
  if (!res.completed)
    std::fprintf(stderr, "aborted: %s\n", res.abort_reason.c_str());
  return res.completed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multirotor flight-dynamics simulation harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", param, values_csv, log_path;
  std::vector<std::string> overrides;
  double rev_period = 0.0, t_start = 0.0, window = 0.5, deadband = 0.005;

  auto* run = app.add_subcommand("run", "simulate one scenario");
  run->add_option("--config", config_path, "scenario config file")->required();
  run->add_option("--set", overrides, "key=value override (repeatable)");
  run->add_option("--out", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "simulate one scenario per parameter value");
  sweep->add_option("--config", config_path, "scenario config file")->required();
  sweep->add_option("--param", param, "config key to sweep")->required();
  sweep->add_option("--values", values_csv, "comma-separated values")->required();
  sweep->add_option("--set", overrides, "key=value override (repeatable)");
  sweep->add_option("--out", out_dir, "output directory");

  auto* metrics = app.add_subcommand("metrics", "summarize an existing run.csv");
  metrics->add_option("--log", log_path, "run.csv produced by `run`")->required();
  metrics->add_option("--rev-period", rev_period, "revolution segment length (s)");
  metrics->add_option("--t-start", t_start, "aggregation window start (s)");
  metrics->add_option("--window", window, "smoothing window (s)");
  metrics->add_option("--deadband", deadband, "zero-crossing hysteresis (m)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_one(load_scenario(config_path, overrides), out_dir) ? 0 : 2;
    }
    if (sweep->parsed()) {
      std::vector<std::string> values;
      std::stringstream ss(values_csv);
      std::string v;
      while (std::getline(ss, v, ',')) values.push_back(v);
      if (values.empty()) throw std::invalid_argument("--values is empty");
      bool all_ok = true;
      for (const auto& val : values) {
        auto ov = overrides;
        ov.push_back(param + "=" + val);
        mrsim::ScenarioConfig sc = load_scenario(config_path, ov);
        sc.name += " [" + param + "=" + val + "]";
        std::printf("--- %s = %s ---\n", param.c_str(), val.c_str());
        all_ok &= run_one(sc, out_dir + "/" + param + "=" + val);
      }
      return all_ok ? 0 : 2;
    }
    // metrics
    const std::vector<mrsim::LogRow> log = mrsim::read_run_csv(log_path);
    const mrsim::MetricsSummary m =
        mrsim::compute_metrics(log, rev_period, t_start, window, deadband);
    std::printf("rows               = %zu\n", log.size());
    std::printf("window_t_s         = [%.9g, %.9g]\n", m.t_begin, m.t_end);
    std::printf("mean_pos_err_m     = %.9g\n", m.mean_pos_err);
    std::printf("max_pos_err_m      = %.9g\n", m.max_pos_err);
    std::printf("mean_speed_mps     = %.9g\n", m.mean_speed);
    std::printf("max_excursion_m    = %.9g %.9g %.9g\n", m.max_excursion.x(),
                m.max_excursion.y(), m.max_excursion.z());
    std::printf("alt_peak_err_m     = %.9g\n", m.alt_peak_err);
    std::printf("alt_zero_crossings = %d\n", m.alt_zero_crossings);
    std::printf("per_rev_err_m      =");
    for (double e : m.per_rev_err) std::printf(" %.9g", e);
    std::printf("\n");
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
