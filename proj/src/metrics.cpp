#include "mrsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrsim {

MetricsSummary compute_metrics(const std::vector<LogRow>& log, double rev_period,
                               double t_start, double window, double deadband) {
  if (log.empty()) throw std::invalid_argument("empty log");
  if (window < 0.0 || deadband < 0.0)
    throw std::invalid_argument("window and deadband must be non-negative");

  const std::size_t n = log.size();
  std::vector<double> err(n);
  for (std::size_t i = 0; i < n; ++i) err[i] = (log[i].p - log[i].ref_p).norm();

  MetricsSummary m;
  m.window = window;
  m.deadband = deadband;

  // Scalar statistics over the aggregation window.
  double err_sum = 0.0, speed_sum = 0.0;
  int sign = 0;  // hysteresis state of the altitude error
  for (std::size_t i = 0; i < n; ++i) {
    if (log[i].t < t_start - 1e-12) continue;
    if (m.samples == 0) m.t_begin = log[i].t;
    m.t_end = log[i].t;
    ++m.samples;
    err_sum += err[i];
    speed_sum += log[i].v.norm();
    m.max_pos_err = std::max(m.max_pos_err, err[i]);
    m.max_excursion =
        m.max_excursion.cwiseMax((log[i].p - log[i].ref_p).cwiseAbs());
    const double ez = log[i].p.z() - log[i].ref_p.z();
    m.alt_peak_err = std::max(m.alt_peak_err, std::abs(ez));
    if (ez > deadband) {
      if (sign < 0) ++m.alt_zero_crossings;
      sign = 1;
    } else if (ez < -deadband) {
      if (sign > 0) ++m.alt_zero_crossings;
      sign = -1;
    }
  }
  if (m.samples == 0) throw std::invalid_argument("aggregation window is empty");
  m.mean_pos_err = err_sum / m.samples;
  m.mean_speed = speed_sum / m.samples;

  // Centered moving average over the whole log, truncated at the edges.
  m.smoothed_t.resize(n);
  m.smoothed_err.resize(n);
  const double half = window / 2.0;
  std::size_t lo = 0, hi = 0;  // window [lo, hi)
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    while (hi < n && log[hi].t <= log[i].t + half + 1e-12) acc += err[hi++];
    while (lo < n && log[lo].t < log[i].t - half - 1e-12) acc -= err[lo++];
    m.smoothed_t[i] = log[i].t;
    m.smoothed_err[i] = acc / static_cast<double>(hi - lo);
  }

  // Per-revolution means over the whole log; a trailing sliver shorter than
  // half the nominal segment is dropped.
  if (rev_period > 0.0) {
    std::vector<double> sums;
    std::vector<long> counts;
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(std::floor(log[i].t / rev_period + 1e-12));
      if (k >= sums.size()) {
        sums.resize(k + 1, 0.0);
        counts.resize(k + 1, 0);
      }
      sums[k] += err[i];
      counts[k] += 1;
    }
    const long full = *std::max_element(counts.begin(), counts.end());
    for (std::size_t k = 0; k < sums.size(); ++k) {
      if (counts[k] * 2 < full) continue;
      m.per_rev_err.push_back(sums[k] / static_cast<double>(counts[k]));
    }
  }
  return m;
}

}  // namespace mrsim
