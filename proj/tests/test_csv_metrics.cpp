#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mrsim/csv_io.hpp"
#include "mrsim/metrics.hpp"

using namespace mrsim;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string(MRSIM_TEST_TMPDIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(bool(is));
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

LogRow sample_row(double t) {
  LogRow r;
  r.t = t;
  r.p = Vec3(1.25, -3.5, 0.015625);
  r.v = Vec3(0.5, 2.0, -1.0);
  r.q = Eigen::Vector4d(0.5, 0.5, -0.5, 0.5);
  r.omega = Vec3(0.125, -0.25, 8.0);
  r.u = 9.5;
  r.psi = -0.75;
  r.u_des = 10.25;
  r.u_ctl = 10.0;
  r.alpha = Vec3(-2.0, 4.0, 0.0625);
  r.ref_p = Vec3(1.0, -3.0, 0.0);
  r.ref_v = Vec3(0.25, 1.75, -1.0);
  r.ref_psi = -0.5;
  r.f_true = Vec3(3.0, 0.0, -1.5);
  r.f_hat = Vec3(2.75, 0.125, -1.25);
  r.d_hat = Vec3(0.5, -0.5, 0.25);
  r.sat_u = 1;
  return r;
}

void check_rows_close(const LogRow& a, const LogRow& b, double rel) {
  auto close = [&](double x, double y) {
    CHECK(std::abs(x - y) <= rel * std::max({1.0, std::abs(x), std::abs(y)}));
  };
  close(a.t, b.t);
  for (int i = 0; i < 3; ++i) close(a.p[i], b.p[i]);
  for (int i = 0; i < 3; ++i) close(a.v[i], b.v[i]);
  for (int i = 0; i < 4; ++i) close(a.q[i], b.q[i]);
  for (int i = 0; i < 3; ++i) close(a.omega[i], b.omega[i]);
  close(a.u, b.u);
  close(a.psi, b.psi);
  close(a.u_des, b.u_des);
  close(a.u_ctl, b.u_ctl);
  for (int i = 0; i < 3; ++i) close(a.alpha[i], b.alpha[i]);
  for (int i = 0; i < 3; ++i) close(a.ref_p[i], b.ref_p[i]);
  for (int i = 0; i < 3; ++i) close(a.ref_v[i], b.ref_v[i]);
  close(a.ref_psi, b.ref_psi);
  for (int i = 0; i < 3; ++i) close(a.f_true[i], b.f_true[i]);
  for (int i = 0; i < 3; ++i) close(a.f_hat[i], b.f_hat[i]);
  for (int i = 0; i < 3; ++i) close(a.d_hat[i], b.d_hat[i]);
  CHECK(a.sat_u == b.sat_u);
}

/// Minimal row for metrics tests: only t, p, ref_p, v matter.
LogRow metric_row(double t, const Vec3& err, const Vec3& v = Vec3::Zero()) {
  LogRow r;
  r.t = t;
  r.ref_p = Vec3(10.0, -2.0, 5.0);  // arbitrary nonzero base
  r.p = r.ref_p + err;
  r.v = v;
  return r;
}

}  // namespace

TEST_CASE("column schema is stable and unit-suffixed") {
  const auto& cols = run_csv_columns();
  REQUIRE(cols.size() == 38);
  CHECK(cols.front() == "t_s");
  CHECK(cols.back() == "sat_u");
  CHECK(cols[1] == "px_m");
  CHECK(cols[7] == "qw");
  CHECK(cols[14] == "u_mps2");
}

TEST_CASE("round trip preserves values exactly representable in 9 digits") {
  const std::string path = tmp_path("roundtrip_exact.csv");
  std::vector<LogRow> log = {sample_row(0.0), sample_row(0.25)};
  log[1].sat_u = 0;
  write_run_csv(path, log);
  const auto back = read_run_csv(path);
  REQUIRE(back.size() == 2);
  check_rows_close(log[0], back[0], 0.0);  // dyadic values survive bit-exactly
  check_rows_close(log[1], back[1], 0.0);
}

TEST_CASE("round trip holds arbitrary doubles to 9 significant digits") {
  const std::string path = tmp_path("roundtrip_rel.csv");
  LogRow r = sample_row(0.0123456789123);
  r.p = Vec3(M_PI, -std::sqrt(2.0), 1.0 / 3.0);
  r.u = 123456.789123;
  r.f_true = Vec3(1e-11, -7.77777777e7, 0.0);
  write_run_csv(path, {r});
  const auto back = read_run_csv(path);
  REQUIRE(back.size() == 1);
  check_rows_close(r, back[0], 1e-8);
}

TEST_CASE("file structure is RFC-4180 with CRLF rows") {
  const std::string path = tmp_path("structure.csv");
  write_run_csv(path, {sample_row(0.0), sample_row(0.01), sample_row(0.02)});
  const std::string text = slurp(path);
  CHECK(count_occurrences(text, "\r\n") == 4);  // header + 3 rows
  CHECK(count_occurrences(text, "\n") == 4);    // no bare LF anywhere
  CHECK(text.substr(text.size() - 2) == "\r\n");
  const std::string header = text.substr(0, text.find("\r\n"));
  const auto& cols = run_csv_columns();
  CHECK(count_occurrences(header, ",") == cols.size() - 1);
  CHECK(header.rfind("t_s,", 0) == 0);
  // Values are printed with 9 significant digits.
  LogRow r;
  r.t = 0.123456789123;
  r.u = 1.0 / 3.0;
  write_run_csv(path, {r});
  const std::string text2 = slurp(path);
  CHECK(text2.find("0.123456789") != std::string::npos);
  CHECK(text2.find("0.333333333") != std::string::npos);
}

TEST_CASE("empty log produces a parseable header-only file") {
  const std::string path = tmp_path("empty.csv");
  write_run_csv(path, {});
  const std::string text = slurp(path);
  CHECK(count_occurrences(text, "\r\n") == 1);
  CHECK(read_run_csv(path).empty());
}

TEST_CASE("reader rejects mangled files") {
  const std::string good = tmp_path("good.csv");
  write_run_csv(good, {sample_row(0.0)});
  const std::string text = slurp(good);

  const std::string bad_header = tmp_path("bad_header.csv");
  write_text(bad_header, "nonsense," + text);
  CHECK_THROWS_AS(read_run_csv(bad_header), std::runtime_error);

  // Drop the last cell of the data row.
  const std::string short_row = tmp_path("short_row.csv");
  const auto cut = text.rfind(",");
  write_text(short_row, text.substr(0, cut) + "\r\n");
  CHECK_THROWS_AS(read_run_csv(short_row), std::runtime_error);

  const std::string long_row = tmp_path("long_row.csv");
  write_text(long_row, text.substr(0, text.size() - 2) + ",1\r\n");
  CHECK_THROWS_AS(read_run_csv(long_row), std::runtime_error);

  CHECK_THROWS_AS(read_run_csv(tmp_path("does_not_exist.csv")), std::runtime_error);
}

TEST_CASE("write failures report the path") {
  try {
    write_run_csv("/nonexistent-dir/x.csv", {});
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/x.csv") != std::string::npos);
  }
}

TEST_CASE("scalar statistics over the aggregation window") {
  std::vector<LogRow> log;
  const double dt = 0.01;
  for (int k = 0; k < 1000; ++k) {
    const double t = k * dt;
    const Vec3 err = t < 5.0 ? Vec3(1.0, 0.0, 0.0) : Vec3(0.0, 0.0, -3.0);
    log.push_back(metric_row(t, err, Vec3(3.0, 4.0, 0.0)));
  }
  const MetricsSummary all = compute_metrics(log, 0.0, 0.0);
  CHECK(all.samples == 1000);
  CHECK(all.mean_pos_err == doctest::Approx(2.0));
  CHECK(all.max_pos_err == doctest::Approx(3.0));
  CHECK(all.mean_speed == doctest::Approx(5.0));
  CHECK(all.max_excursion.x() == doctest::Approx(1.0));
  CHECK(all.max_excursion.y() == doctest::Approx(0.0));
  CHECK(all.max_excursion.z() == doctest::Approx(3.0));
  CHECK(all.alt_peak_err == doctest::Approx(3.0));
  CHECK(all.t_begin == doctest::Approx(0.0));
  CHECK(all.t_end == doctest::Approx(9.99));

  const MetricsSummary tail = compute_metrics(log, 0.0, 5.0);
  CHECK(tail.samples == 500);
  CHECK(tail.t_begin == doctest::Approx(5.0));
  CHECK(tail.mean_pos_err == doctest::Approx(3.0));
  CHECK(tail.max_excursion.x() == doctest::Approx(0.0));
  CHECK(tail.per_rev_err.empty());
}

TEST_CASE("constant error is reproduced exactly by the smoother") {
  std::vector<LogRow> log;
  for (int k = 0; k < 500; ++k) log.push_back(metric_row(k * 0.01, Vec3(0.02, 0, 0)));
  const MetricsSummary m = compute_metrics(log, 1.0);
  REQUIRE(m.smoothed_err.size() == 500);
  for (double s : m.smoothed_err) CHECK(s == doctest::Approx(0.02).epsilon(1e-12));
  REQUIRE(m.per_rev_err.size() == 5);
  for (double e : m.per_rev_err) CHECK(e == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("impulse response of the centered moving average") {
  std::vector<LogRow> log;
  const int n = 201;
  for (int k = 0; k < n; ++k) {
    const Vec3 err = k == 100 ? Vec3(0, 0, 1.0) : Vec3::Zero();
    log.push_back(metric_row(k * 0.01, err));
  }
  const MetricsSummary m = compute_metrics(log, 0.0, 0.0, 0.5);
  REQUIRE(m.smoothed_err.size() == static_cast<std::size_t>(n));
  CHECK(m.smoothed_t[100] == doctest::Approx(1.0));
  // The 0.5 s window spans 51 samples at 100 Hz in the interior.
  for (int i : {75, 100, 125})
    CHECK(m.smoothed_err[i] == doctest::Approx(1.0 / 51.0).epsilon(1e-12));
  CHECK(m.smoothed_err[74] == doctest::Approx(0.0));
  CHECK(m.smoothed_err[126] == doctest::Approx(0.0));
  // Truncated at the edge: the first sample only sees [0, 0.25].
  std::vector<LogRow> edge = log;
  edge[0].p = edge[0].ref_p + Vec3(0, 0, 1.0);
  edge[100].p = edge[100].ref_p;
  const MetricsSummary me = compute_metrics(edge, 0.0, 0.0, 0.5);
  CHECK(me.smoothed_err[0] == doctest::Approx(1.0 / 26.0).epsilon(1e-12));
  // A zero window reproduces the raw series.
  const MetricsSummary raw = compute_metrics(log, 0.0, 0.0, 0.0);
  CHECK(raw.smoothed_err[100] == doctest::Approx(1.0));
  CHECK(raw.smoothed_err[99] == doctest::Approx(0.0));
}

TEST_CASE("altitude zero crossings use deadband hysteresis") {
  auto series_crossings = [](const std::vector<double>& ez) {
    std::vector<LogRow> log;
    for (std::size_t k = 0; k < ez.size(); ++k)
      log.push_back(metric_row(k * 0.01, Vec3(0, 0, ez[k])));
    return compute_metrics(log, 0.0).alt_zero_crossings;
  };
  // The first excursion arms the detector but is not itself a crossing.
  CHECK(series_crossings({0.01, 0.02, 0.01}) == 0);
  CHECK(series_crossings({0.01, -0.01, 0.01}) == 2);
  // Chatter inside the +/-0.005 deadband does not count.
  CHECK(series_crossings({0.01, 0.004, -0.004, 0.004, -0.004, 0.01}) == 0);
  CHECK(series_crossings({0.01, 0.004, -0.004, 0.004, -0.01}) == 1);
  // Exactly at the deadband boundary stays inside.
  CHECK(series_crossings({0.01, -0.005, 0.005, -0.01}) == 1);
}

TEST_CASE("per-revolution segmentation drops a short trailing sliver") {
  std::vector<LogRow> log;
  for (int k = 0; k < 1000; ++k) {
    const double t = k * 0.01;  // 10 s
    log.push_back(metric_row(t, Vec3(std::floor(t / 3.0) + 1.0, 0, 0)));
  }
  // Segments [0,3) [3,6) [6,9) are full; [9,10) has a third of the samples.
  const MetricsSummary m = compute_metrics(log, 3.0);
  REQUIRE(m.per_rev_err.size() == 3);
  CHECK(m.per_rev_err[0] == doctest::Approx(1.0));
  CHECK(m.per_rev_err[1] == doctest::Approx(2.0));
  CHECK(m.per_rev_err[2] == doctest::Approx(3.0));
  // A clean division keeps every segment.
  const MetricsSummary m4 = compute_metrics(log, 2.5);
  CHECK(m4.per_rev_err.size() == 4);
  // Per-revolution means always cover the whole log, not just the window.
  const MetricsSummary tail = compute_metrics(log, 3.0, 9.0);
  REQUIRE(tail.per_rev_err.size() == 3);
  CHECK(tail.per_rev_err[0] == doctest::Approx(1.0));
}

TEST_CASE("metrics reject unusable inputs") {
  CHECK_THROWS_AS(compute_metrics({}, 0.0), std::invalid_argument);
  std::vector<LogRow> log = {metric_row(0.0, Vec3::Zero())};
  CHECK_THROWS_AS(compute_metrics(log, 0.0, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_metrics(log, 0.0, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_metrics(log, 0.0, 0.0, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("run summaries are deterministic and carry the headline numbers") {
  ScenarioConfig sc;
  sc.name = "summary-demo";
  RunResult res;
  res.log = {metric_row(0.0, Vec3(0.5, 0, 0)), metric_row(0.01, Vec3(0.5, 0, 0))};
  res.sim_time = 0.02;
  res.metrics_start = 0.0;
  const MetricsSummary m = compute_metrics(res.log, 0.0);
  const std::string a = format_summary(sc, res, m);
  const std::string b = format_summary(sc, res, m);
  CHECK(a == b);
  CHECK(a.find("summary-demo") != std::string::npos);
  CHECK(a.find("completed") != std::string::npos);
  CHECK(a.find("0.5") != std::string::npos);

  res.completed = false;
  res.abort_reason = "thrust fell below the controllable minimum";
  const std::string c = format_summary(sc, res, m);
  CHECK(c.find("aborted") != std::string::npos);
  CHECK(c.find(res.abort_reason) != std::string::npos);
}
