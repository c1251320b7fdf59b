#include "stsperf/model.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "stsperf/error.hpp"
#include "stsperf/graph.hpp"
#include "stsperf/numfmt.hpp"

namespace stsperf {

namespace {

bool is_valid_state_id(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
    return true;
}

std::string transition_location(std::size_t index, const Transition& t) {
    return "transition " + std::to_string(index + 1) + " (" + t.from + "->" + t.to + ")";
}

// Returns an empty string if the distribution satisfies its invariants,
// otherwise the reason it does not.
std::string distribution_problem(const DelayDistribution& d) {
    auto finite = [](double v) { return std::isfinite(v); };
    switch (d.kind) {
    case DelayKind::Constant:
        if (!finite(d.a)) return "constant value is not finite";
        if (d.a < 0) return "constant value is negative";
        return "";
    case DelayKind::Uniform:
        if (!finite(d.a) || !finite(d.b)) return "uniform bound is not finite";
        if (d.a < 0) return "uniform min is negative";
        if (d.a > d.b) return "uniform min exceeds max";
        return "";
    case DelayKind::Exponential:
        if (!finite(d.a)) return "exponential mean is not finite";
        if (d.a <= 0) return "exponential mean must be positive";
        return "";
    case DelayKind::TruncatedNormal:
        if (!finite(d.a) || !finite(d.b)) return "truncated_normal parameter is not finite";
        if (d.b < 0) return "truncated_normal sd is negative";
        if (d.b == 0 && d.a < 0) return "truncated_normal support is empty (sd = 0, mean < 0)";
        return "";
    }
    return "unknown distribution kind";
}

} // namespace

ValidationReport validate(const StsModel& model) {
    ValidationReport report;
    auto error = [&](std::string code, std::string message, std::string location) {
        report.findings.push_back(
            {Severity::Error, std::move(code), std::move(message), std::move(location)});
    };
    auto warning = [&](std::string code, std::string message, std::string location) {
        report.findings.push_back(
            {Severity::Warning, std::move(code), std::move(message), std::move(location)});
    };

    // State declarations.
    std::unordered_set<std::string> declared;
    for (const auto& id : model.states) {
        if (!is_valid_state_id(id))
            error("BadStateId", "state id must be a nonempty token without whitespace",
                  "state '" + id + "'");
        if (!declared.insert(id).second)
            error("DuplicateState", "state '" + id + "' is declared more than once", "state " + id);
    }

    bool endpoints_ok = true;
    if (!declared.count(model.start)) {
        error("StartUndeclared", "start state '" + model.start + "' is not declared", "start");
        endpoints_ok = false;
    }
    if (model.stop.empty()) {
        error("EmptyStop", "at least one stop state is required", "stop");
        endpoints_ok = false;
    }
    for (const auto& id : model.stop) {
        if (!declared.count(id)) {
            error("UnknownState", "stop state '" + id + "' is not declared", "stop");
            endpoints_ok = false;
        }
    }

    // Per-transition checks.
    for (std::size_t i = 0; i < model.transitions.size(); ++i) {
        const auto& t = model.transitions[i];
        const std::string where = transition_location(i, t);
        if (!declared.count(t.from)) {
            error("UnknownState", "source state '" + t.from + "' is not declared", where);
            endpoints_ok = false;
        }
        if (!declared.count(t.to)) {
            error("UnknownState", "target state '" + t.to + "' is not declared", where);
            endpoints_ok = false;
        }
        if (!std::isfinite(t.probability) || t.probability <= 0 || t.probability > 1)
            error("InvalidProbability",
                  "probability must lie in (0, 1], got " + format_sig6(t.probability), where);
        if (auto reason = distribution_problem(t.delay); !reason.empty())
            error("InvalidDistribution", reason, where);
    }
    if (model.overhead_in)
        if (auto reason = distribution_problem(*model.overhead_in); !reason.empty())
            error("InvalidDistribution", reason, "overhead in");
    if (model.overhead_out)
        if (auto reason = distribution_problem(*model.overhead_out); !reason.empty())
            error("InvalidDistribution", reason, "overhead out");

    // Outgoing probabilities must sum to 1 at every state that has any.
    std::unordered_map<std::string, double> sums;
    for (const auto& t : model.transitions) sums[t.from] += t.probability;
    for (const auto& id : model.states) {
        auto it = sums.find(id);
        if (it != sums.end() && std::abs(it->second - 1.0) > kProbabilitySumEps)
            error("ProbabilitySum", "outgoing probabilities sum to " + format_sig6(it->second),
                  "state " + id);
    }

    // Reachability over the run graph; skipped when endpoints are broken.
    if (endpoints_ok) {
        RunGraph g = build_run_graph(model);
        auto reached = reachable_from_start(g);
        auto reaches_stop = can_reach_stop(g);
        for (std::size_t node = 0; node < g.node_count(); ++node) {
            if (!reached[node]) {
                if (node < model.states.size())
                    warning("UnreachableState", "state '" + g.node_ids[node] + "' is never visited",
                            "state " + g.node_ids[node]);
                continue;
            }
            if (g.node_is_stop[node]) continue;
            if (g.node_outgoing[node].empty())
                error("NoOutgoing", "reachable non-stop state has no outgoing transition",
                      "state " + g.node_ids[node]);
            else if (!reaches_stop[node])
                error("StopUnreachable", "no stop state is reachable from here",
                      "state " + g.node_ids[node]);
        }
    }
    return report;
}

Moments distribution_moments(const DelayDistribution& d) {
    switch (d.kind) {
    case DelayKind::Constant:
        return {d.a, d.a * d.a};
    case DelayKind::Uniform:
        return {(d.a + d.b) / 2.0, (d.a * d.a + d.a * d.b + d.b * d.b) / 3.0};
    case DelayKind::Exponential:
        return {d.a, 2.0 * d.a * d.a};
    case DelayKind::TruncatedNormal:
        break;
    }
    throw StsError("UnsupportedDistribution", "truncated_normal has no closed-form moments");
}

Support distribution_support(const DelayDistribution& d) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (d.kind) {
    case DelayKind::Constant:
        return {d.a, d.a};
    case DelayKind::Uniform:
        return {d.a, d.b};
    case DelayKind::Exponential:
        return {0.0, inf};
    case DelayKind::TruncatedNormal:
        if (d.b == 0) return {d.a, d.a};
        return {0.0, inf};
    }
    return {0.0, inf};
}

} // namespace stsperf
