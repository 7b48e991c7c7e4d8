#pragma once

#include <string>
#include <vector>

#include "mrsim/harness.hpp"
#include "mrsim/metrics.hpp"

namespace mrsim {

/// Log-file column names (unit-suffixed), in file order.
const std::vector<std::string>& run_csv_columns();

/// RFC-4180 CSV (CRLF rows, header first): one row per record, floats with
/// 9 significant digits. An empty log produces a header-only file. Throws
/// std::runtime_error with the path on I/O failure.
void write_run_csv(const std::string& path, const std::vector<LogRow>& log);

/// Parses a file written by write_run_csv; validates the header and the
/// per-row column count.
std::vector<LogRow> read_run_csv(const std::string& path);

/// Human-readable run summary: scenario echo, run status, metric block and
/// the per-revolution table. Deterministic for a fixed input.
std::string format_summary(const ScenarioConfig& sc, const RunResult& res,
                           const MetricsSummary& m);

void write_text(const std::string& path, const std::string& text);

}  // namespace mrsim
