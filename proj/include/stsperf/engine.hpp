#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "stsperf/graph.hpp"
#include "stsperf/model.hpp"
#include "stsperf/rng.hpp"

namespace stsperf {

enum class Measure { Service, Response };

struct SimulationConfig {
    std::uint64_t runs = 1;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 1'000'000;
    Measure measure = Measure::Service;
};

struct RunRecord {
    std::uint64_t index = 0;      // 0-based replication index
    double service_time = 0.0;    // ms
    double response_time = 0.0;   // ms; service plus sampled overheads
    std::uint64_t steps = 0;      // transitions taken, >= 1

    bool operator==(const RunRecord&) const = default;
};

struct SimulationSummary {
    std::uint64_t count = 0;
    double mean = 0.0;
    double std = 0.0;             // sample std, n-1 denominator; 0 when n == 1
    double min = 0.0;
    double max = 0.0;
    double p50 = 0.0, p90 = 0.0, p95 = 0.0, p99 = 0.0;
    double ci95_halfwidth = 0.0;  // 1.96 * std / sqrt(n)
};

// Sampling formulas, split out so the arithmetic is testable with an exact
// unit draw u in [0, 1).
inline double sample_uniform(double min, double max, double u) { return min + u * (max - min); }
inline double sample_exponential(double mean, double u) {
    // u in [0,1) keeps the log argument in (0,1]; "+ 0.0" normalizes the
    // negative zero that u == 0 would produce.
    return -mean * std::log(1.0 - u) + 0.0;
}

// One sample from a delay law. Draws consumed per call:
//   constant 0, uniform 1, exponential 1, truncated_normal 2 per
//   rejection attempt (Box-Muller, cosine half; negatives resampled so the
//   truncation is bias-free). Result is always >= 0.
double sample_delay(const DelayDistribution& d, RngStream& rng);

// Cumulative-probability case selection for a draw u in [0, 1): the first
// index i with u < p_0 + ... + p_i, or the last index if rounding leaves u
// at or past the final cumulative sum.
std::size_t pick_case(std::span<const double> probabilities, double u);

// Selects an outgoing transition. Exactly one candidate consumes no
// randomness; otherwise one draw feeds pick_case. Candidates must be in
// document order with probabilities summing to 1.
std::size_t choose_transition(std::span<const double> probabilities, RngStream& rng);

// One replication over a prebuilt run graph: walk from the start node,
// halting on entry to a stop node. Service draws happen strictly before the
// overhead draws (in, then out), so the service-time draw sequence is
// independent of whether overheads exist.
// Throws StsError("NonTermination") when a walk needs more than max_steps
// transitions and StsError("DeadEnd") on a non-stop node without outgoing
// transitions (validation reports the latter as NoOutgoing beforehand).
RunRecord simulate_run(const StsModel& model, const RunGraph& graph, RngStream& rng,
                       std::uint64_t max_steps);

// Convenience overload building the run graph internally.
RunRecord simulate_run(const StsModel& model, RngStream& rng, std::uint64_t max_steps);

struct SimulationResult {
    std::vector<RunRecord> records;
    SimulationSummary summary; // over cfg.measure
};

// Replicated simulation. Replication i draws from
// RngStream::for_replication(cfg.seed, i), so the record list is identical
// whether replications run sequentially or across threads. threads == 0
// picks a worker count automatically; errors are rethrown annotated with
// the lowest failing replication index, matching sequential behavior.
SimulationResult simulate(const StsModel& model, const SimulationConfig& cfg,
                          unsigned threads = 1);

// Aggregate statistics over a nonempty sample. Percentiles use the
// nearest-rank method (rank = ceil(q * n) into the sorted sample). Throws
// StsError("EmptyInput") on an empty list.
SimulationSummary summarize(std::span<const double> values);

} // namespace stsperf
