#include "mrsim/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mrsim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

}  // namespace

const std::vector<std::string>& run_csv_columns() {
  static const std::vector<std::string> cols = {
      "t_s",
      "px_m", "py_m", "pz_m",
      "vx_mps", "vy_mps", "vz_mps",
      "qw", "qx", "qy", "qz",
      "wx_radps", "wy_radps", "wz_radps",
      "u_mps2",
      "psi_rad",
      "u_des_mps2",
      "u_ctl_mps2",
      "alx_radps2", "aly_radps2", "alz_radps2",
      "ref_px_m", "ref_py_m", "ref_pz_m",
      "ref_vx_mps", "ref_vy_mps", "ref_vz_mps",
      "ref_psi_rad",
      "f_true_x_mps2", "f_true_y_mps2", "f_true_z_mps2",
      "f_hat_x_mps2", "f_hat_y_mps2", "f_hat_z_mps2",
      "d_hat_x_mps2", "d_hat_y_mps2", "d_hat_z_mps2",
      "sat_u",
  };
  return cols;
}

void write_run_csv(const std::string& path, const std::vector<LogRow>& log) {
  std::ofstream os(path, std::ios::binary);
  require(bool(os), "cannot open for writing: " + path);
  const auto& cols = run_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << "\r\n";
  for (const auto& r : log) {
    os << fmt(r.t);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.p[i]);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.v[i]);
    for (int i = 0; i < 4; ++i) os << ',' << fmt(r.q[i]);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.omega[i]);
    os << ',' << fmt(r.u) << ',' << fmt(r.psi) << ',' << fmt(r.u_des) << ','
       << fmt(r.u_ctl);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.alpha[i]);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.ref_p[i]);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.ref_v[i]);
    os << ',' << fmt(r.ref_psi);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.f_true[i]);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.f_hat[i]);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.d_hat[i]);
    os << ',' << r.sat_u << "\r\n";
  }
  require(bool(os), "write failed: " + path);
}

std::vector<LogRow> read_run_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(bool(is), "cannot open for reading: " + path);
  std::string line;
  require(bool(std::getline(is, line)), "empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto& cols = run_csv_columns();
  std::string header;
  for (std::size_t i = 0; i < cols.size(); ++i) header += (i ? "," : "") + cols[i];
  require(line == header, "unexpected header in " + path);

  std::vector<LogRow> log;
  std::vector<double> cells(cols.size());
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      require(k < cols.size(), "too many columns in " + path);
      cells[k++] = std::stod(cell);
    }
    require(k == cols.size(), "wrong column count in " + path);

    LogRow r;
    k = 0;
    r.t = cells[k++];
    for (int i = 0; i < 3; ++i) r.p[i] = cells[k++];
    for (int i = 0; i < 3; ++i) r.v[i] = cells[k++];
    for (int i = 0; i < 4; ++i) r.q[i] = cells[k++];
    for (int i = 0; i < 3; ++i) r.omega[i] = cells[k++];
    r.u = cells[k++];
    r.psi = cells[k++];
    r.u_des = cells[k++];
    r.u_ctl = cells[k++];
    for (int i = 0; i < 3; ++i) r.alpha[i] = cells[k++];
    for (int i = 0; i < 3; ++i) r.ref_p[i] = cells[k++];
    for (int i = 0; i < 3; ++i) r.ref_v[i] = cells[k++];
    r.ref_psi = cells[k++];
    for (int i = 0; i < 3; ++i) r.f_true[i] = cells[k++];
    for (int i = 0; i < 3; ++i) r.f_hat[i] = cells[k++];
    for (int i = 0; i < 3; ++i) r.d_hat[i] = cells[k++];
    r.sat_u = static_cast<int>(cells[k++]);
    log.push_back(r);
  }
  return log;
}

std::string format_summary(const ScenarioConfig& sc, const RunResult& res,
                           const MetricsSummary& m) {
  std::ostringstream os;
  os << "run summary\n";
  os << "scenario           = " << sc.name << "\n";
  os << "controller         = " << to_string(sc.controller) << "\n";
  os << "compensation       = " << to_string(sc.compensation) << "\n";
  os << "seed               = " << sc.seed << "\n";
  os << "trials             = " << sc.trials << "\n";
  os << "status             = "
     << (res.completed ? "completed" : "aborted: " + res.abort_reason) << "\n";
  os << "sim_time_s         = " << fmt(res.sim_time) << "\n";
  os << "wall_time_s        = " << fmt(res.wall_time) << "\n";
  os << "rows               = " << res.log.size() << "\n";
  if (res.learner_updates + res.learner_rejected > 0) {
    os << "learner_updates    = " << res.learner_updates << "\n";
    os << "learner_rejected   = " << res.learner_rejected << "\n";
    os << "learner_condition  = " << fmt(res.learner_condition) << "\n";
  }
  os << "window_t_s         = [" << fmt(m.t_begin) << ", " << fmt(m.t_end) << "]\n";
  os << "smoothing_window_s = " << fmt(m.window) << "\n";
  os << "deadband_m         = " << fmt(m.deadband) << "\n";
  os << "mean_pos_err_m     = " << fmt(m.mean_pos_err) << "\n";
  os << "max_pos_err_m      = " << fmt(m.max_pos_err) << "\n";
  os << "mean_speed_mps     = " << fmt(m.mean_speed) << "\n";
  os << "max_excursion_m    = " << fmt(m.max_excursion.x()) << " "
     << fmt(m.max_excursion.y()) << " " << fmt(m.max_excursion.z()) << "\n";
  os << "alt_peak_err_m     = " << fmt(m.alt_peak_err) << "\n";
  os << "alt_zero_crossings = " << m.alt_zero_crossings << "\n";
  os << "per_rev_err_m      =";
  for (double e : m.per_rev_err) os << " " << fmt(e);
  os << "\n";
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  require(bool(os), "cannot open for writing: " + path);
  os << text;
  require(bool(os), "write failed: " + path);
}

}  // namespace mrsim
