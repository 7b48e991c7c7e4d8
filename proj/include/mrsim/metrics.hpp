#pragma once

#include <vector>

#include "mrsim/harness.hpp"

namespace mrsim {

/// Scalar statistics over the aggregation window [t_start, end] plus the
/// full-log smoothed error series and per-revolution means.
struct MetricsSummary {
  long samples = 0;              // rows inside the aggregation window
  double t_begin = 0.0;          // s, first aggregated timestamp
  double t_end = 0.0;            // s, last aggregated timestamp
  double mean_pos_err = 0.0;     // m, mean ||p - ref_p||
  double max_pos_err = 0.0;      // m
  double mean_speed = 0.0;       // m/s, mean ||v||
  Vec3 max_excursion = Vec3::Zero();  // m, per-axis max |p - ref_p|
  double alt_peak_err = 0.0;     // m, max |z - ref_z|
  int alt_zero_crossings = 0;    // altitude-error sign flips (hysteresis)
  std::vector<double> smoothed_t;    // s, full log
  std::vector<double> smoothed_err;  // m, centered moving average (truncated)
  std::vector<double> per_rev_err;   // m, mean error per revolution segment
  double window = 0.5;           // s, smoothing window actually applied
  double deadband = 0.005;       // m, zero-crossing hysteresis actually applied
};

/// Computes the summary. rev_period > 0 enables per-revolution segmentation
/// over the whole log (a trailing segment shorter than half the nominal one
/// is dropped); scalar statistics cover rows with t >= t_start. The smoothed
/// series is a centered moving average truncated at the log edges, so a
/// constant signal is reproduced exactly. Zero-crossing counting uses
/// +/-deadband hysteresis on the altitude error. Throws on an empty log.
MetricsSummary compute_metrics(const std::vector<LogRow>& log, double rev_period,
                               double t_start = 0.0, double window = 0.5,
                               double deadband = 0.005);

}  // namespace mrsim
