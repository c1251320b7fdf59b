#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stsperf/model.hpp"

namespace stsperf {

// Exact service-time moments for the start state. The verification oracle:
// Monte-Carlo output is judged against these numbers, not the other way
// around.
struct MomentReport {
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0; // second_moment - mean^2, clamped at 0
    double std = 0.0;
    bool operator==(const MomentReport&) const = default;
};

// One start-to-stop execution path of an acyclic model.
struct PathInfo {
    double probability = 0.0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0; // +inf when an exponential delay lies on the path
    std::vector<std::string> states; // ids in visit order, start through stop
    bool operator==(const PathInfo&) const = default;
};

struct PathEnumeration {
    std::vector<PathInfo> paths; // depth-first, document order
    double aggregate_mean = 0.0; // sum of probability * mean
    double support_min = 0.0;
    double support_max = 0.0;
    bool operator==(const PathEnumeration&) const = default;
};

// Solves E1[s] = sum_t p_t (m1_t + E1[dst]) and the matching second-moment
// recursion over the reachable non-stop states (E = 0 at stops), by Gaussian
// elimination. Handles cycles; the start state's moments are reported.
//
// Throws UnsupportedDistribution (truncated_normal has no closed-form moments
// here), StopUnreachable, SingularSystem.
MomentReport expected_moments(const StsModel& model);

// Enumerates every start-to-stop path of an acyclic model in document order.
// Per-path mean/min/max sum the member distributions' mean and support
// bounds. Independent of expected_moments by construction — the two check
// each other.
//
// Throws CyclicModel, TooManyPaths (more than max_paths), and
// UnsupportedDistribution (per-path means need closed-form distribution
// means too).
PathEnumeration enumerate_paths(const StsModel& model, std::size_t max_paths = 10000);

// Returns a copy of the model with every service-transition delay scaled by
// k = measured_mean / expected_moments(model).mean, so the analytic mean of
// the result equals the measurement. Overheads are left untouched; scaling
// them would conflate transport and compute time. k = 1 reproduces the model
// field for field.
//
// Throws InvalidMeasurement (measured_mean must be finite and > 0, and the
// model's analytic mean nonzero); propagates expected_moments errors.
StsModel calibrate(const StsModel& model, double measured_mean);

namespace detail {

// Gaussian elimination with partial pivoting; a and b are consumed. Throws
// SingularSystem when the best pivot falls below 1e-12.
std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b);

} // namespace detail

} // namespace stsperf
