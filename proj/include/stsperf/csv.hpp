#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stsperf/engine.hpp"

namespace stsperf {

// Per-run results, one data row per replication:
//   run,service_time_ms,response_time_ms
// `run` is 1-based; times use shortest round-tripping decimals, so parsing
// the file back reproduces the records bit for bit.
std::string write_runs_csv(std::span<const RunRecord> records);

// Inverse of write_runs_csv (steps are not stored and come back as 0).
// Throws BadCsv with the offending line number, EmptyInput when there are
// no data rows.
std::vector<RunRecord> read_runs_csv(const std::string& text);

// Trend view for plotting:
//   run,service_time_ms,response_time_ms,moving_avg_ms
// where moving_avg_ms averages the trailing min(window, run) service times.
// Throws EmptyInput.
std::string emit_trend_csv(std::span<const RunRecord> records, std::uint64_t window);

} // namespace stsperf
