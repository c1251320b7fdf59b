#include "stsperf/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stsperf/error.hpp"
#include "stsperf/graph.hpp"
#include "stsperf/numfmt.hpp"

namespace stsperf {

namespace detail {

std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-12)
            throw StsError("SingularSystem",
                           "state equations are singular (pivot below 1e-12); the model has no "
                           "finite expected service time");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[row][c] -= f * a[col][c];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double v = b[i];
        for (std::size_t c = i + 1; c < n; ++c) v -= a[i][c] * x[c];
        x[i] = v / a[i][i];
    }
    return x;
}

} // namespace detail

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}

MomentReport expected_moments(const StsModel& model) {
    const RunGraph g = build_run_graph(model);
    const std::vector<char> reachable = reachable_from_start(g);
    const std::vector<char> stops_ahead = can_reach_stop(g);
    for (std::size_t node = 0; node < g.node_count(); ++node)
        if (reachable[node] && !stops_ahead[node])
            throw StsError("StopUnreachable",
                           "state '" + g.node_ids[node] + "' cannot reach a stop state");

    // Unknowns: reachable non-stop nodes. Stop states pin E1 = E2 = 0, and
    // unreachable states stay out so junk structure cannot poison the system.
    std::vector<std::size_t> unknown(g.node_count(), kNone);
    std::vector<std::size_t> nodes;
    for (std::size_t node = 0; node < g.node_count(); ++node)
        if (reachable[node] && !g.node_is_stop[node]) {
            unknown[node] = nodes.size();
            nodes.push_back(node);
        }

    const std::size_t n = nodes.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b1(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1.0;
        for (std::size_t t : g.node_outgoing[nodes[i]]) {
            const Transition& tr = model.transitions[t];
            const Moments m = distribution_moments(tr.delay);
            b1[i] += tr.probability * m.mean;
            const std::size_t dst = unknown[g.transition_target[t]];
            if (dst != kNone) a[i][dst] -= tr.probability;
        }
    }
    const std::vector<double> e1 = detail::solve_linear(a, b1);

    // Second moments ride on the same matrix: E2[s] = sum p (m2 + 2 m1 E1[dst]
    // + E2[dst]), law of total expectation over the first transition.
    std::vector<double> b2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t : g.node_outgoing[nodes[i]]) {
            const Transition& tr = model.transitions[t];
            const Moments m = distribution_moments(tr.delay);
            const std::size_t dst = unknown[g.transition_target[t]];
            const double e1_dst = dst != kNone ? e1[dst] : 0.0;
            b2[i] += tr.probability * (m.second_moment + 2.0 * m.mean * e1_dst);
        }
    }
    const std::vector<double> e2 = detail::solve_linear(a, b2);

    MomentReport rep;
    rep.mean = e1[unknown[g.start_node]];
    rep.second_moment = e2[unknown[g.start_node]];
    rep.variance = std::max(rep.second_moment - rep.mean * rep.mean, 0.0);
    rep.std = std::sqrt(rep.variance);
    return rep;
}

PathEnumeration enumerate_paths(const StsModel& model, std::size_t max_paths) {
    const RunGraph g = build_run_graph(model);
    if (auto cyc = find_cycle(g))
        throw StsError("CyclicModel",
                       "cycle through state '" + *cyc + "'; execution paths are unbounded");

    PathEnumeration out;
    std::vector<std::string> trail;
    double probability = 1.0, mean = 0.0, lo = 0.0, hi = 0.0;

    auto visit = [&](auto&& self, std::size_t node) -> void {
        trail.push_back(g.node_ids[node]);
        if (g.node_is_stop[node]) {
            if (out.paths.size() == max_paths)
                throw StsError("TooManyPaths", "model has more than " +
                                                   std::to_string(max_paths) +
                                                   " execution paths");
            out.paths.push_back({probability, mean, lo, hi, trail});
        } else {
            for (std::size_t t : g.node_outgoing[node]) {
                const Transition& tr = model.transitions[t];
                const Moments m = distribution_moments(tr.delay);
                const Support sup = distribution_support(tr.delay);
                const double p0 = probability, m0 = mean, lo0 = lo, hi0 = hi;
                probability *= tr.probability;
                mean += m.mean;
                lo += sup.min;
                hi += sup.max;
                self(self, g.transition_target[t]);
                probability = p0, mean = m0, lo = lo0, hi = hi0;
            }
        }
        trail.pop_back();
    };
    visit(visit, g.start_node);

    out.support_min = std::numeric_limits<double>::infinity();
    out.support_max = -std::numeric_limits<double>::infinity();
    for (const PathInfo& p : out.paths) {
        out.aggregate_mean += p.probability * p.mean;
        out.support_min = std::min(out.support_min, p.min);
        out.support_max = std::max(out.support_max, p.max);
    }
    return out;
}

StsModel calibrate(const StsModel& model, double measured_mean) {
    if (!std::isfinite(measured_mean) || measured_mean <= 0)
        throw StsError("InvalidMeasurement", "measured mean must be positive and finite, got " +
                                                 format_sig6(measured_mean));
    const MomentReport rep = expected_moments(model);
    if (rep.mean <= 0)
        throw StsError("InvalidMeasurement",
                       "analytic mean is 0; there is no delay mass to scale");
    const double k = measured_mean / rep.mean;

    StsModel scaled = model;
    for (Transition& t : scaled.transitions) {
        t.delay.a *= k;
        if (t.delay.kind == DelayKind::Uniform || t.delay.kind == DelayKind::TruncatedNormal)
            t.delay.b *= k;
    }
    return scaled;
}

} // namespace stsperf
