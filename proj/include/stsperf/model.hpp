#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stsperf {

// Tolerance for "outgoing probabilities sum to 1" checks, shared by
// validation, branch construction and path enumeration.
inline constexpr double kProbabilitySumEps = 1e-9;

enum class DelayKind { Constant, Uniform, Exponential, TruncatedNormal };

// Waiting-time law attached to a transition. Parameters are milliseconds:
//   Constant        a = value
//   Uniform         a = min, b = max      (continuous over [min, max])
//   Exponential     a = mean
//   TruncatedNormal a = mean, b = sd      (support truncated to [0, inf))
struct DelayDistribution {
    DelayKind kind = DelayKind::Constant;
    double a = 0.0;
    double b = 0.0;

    static DelayDistribution constant(double value) { return {DelayKind::Constant, value, 0.0}; }
    static DelayDistribution uniform(double min, double max) { return {DelayKind::Uniform, min, max}; }
    static DelayDistribution exponential(double mean) { return {DelayKind::Exponential, mean, 0.0}; }
    static DelayDistribution truncated_normal(double mean, double sd) {
        return {DelayKind::TruncatedNormal, mean, sd};
    }

    bool operator==(const DelayDistribution&) const = default;
};

struct Transition {
    std::string from;
    std::string to;
    double probability = 0.0; // in (0, 1]
    DelayDistribution delay;
    std::optional<std::string> label;

    bool operator==(const Transition&) const = default;
};

// The simulation model: a state graph whose transitions carry a branch
// probability and a delay distribution. Transition order is document order
// and is semantic (it fixes branch-case ordering downstream). States and
// stop entries keep their declaration order; uniqueness is a validation
// concern, not a structural one.
struct StsModel {
    std::string name;
    std::string time_unit = "ms";
    std::vector<std::string> states;
    std::string start;
    std::vector<std::string> stop;
    std::vector<Transition> transitions;
    std::optional<DelayDistribution> overhead_in;
    std::optional<DelayDistribution> overhead_out;

    bool is_stop(const std::string& id) const {
        for (const auto& s : stop)
            if (s == id) return true;
        return false;
    }

    bool operator==(const StsModel&) const = default;
};

enum class Severity { Error, Warning };

struct Finding {
    Severity severity = Severity::Error;
    std::string code;     // e.g. "ProbabilitySum", "StopUnreachable"
    std::string message;
    std::string location; // e.g. "state 5b", "transition 3 (5b->5c)"

    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const {
        for (const auto& f : findings)
            if (f.severity == Severity::Error) return false;
        return true;
    }
};

// Semantic validation of a structurally complete model. Pure: never throws,
// never mutates; all problems come back as findings. Error codes:
//   BadStateId, DuplicateState, StartUndeclared, EmptyStop, UnknownState,
//   InvalidProbability, InvalidDistribution, ProbabilitySum, NoOutgoing,
//   StopUnreachable
// plus warning UnreachableState for declared states no run can visit.
ValidationReport validate(const StsModel& model);

struct Moments {
    double mean = 0.0;
    double second_moment = 0.0;
};

// Exact closed-form mean and second moment, in ms and ms^2:
//   constant c       -> (c, c^2)
//   uniform(a, b)    -> ((a+b)/2, (a^2+ab+b^2)/3)
//   exponential(m)   -> (m, 2 m^2)
// Throws StsError("UnsupportedDistribution") for truncated_normal, which has
// no closed form implemented.
Moments distribution_moments(const DelayDistribution& d);

struct Support {
    double min = 0.0;
    double max = 0.0; // +inf for unbounded laws
};

// Support bounds of a delay law; exponential and truncated_normal (sd > 0)
// are unbounded above.
Support distribution_support(const DelayDistribution& d);

} // namespace stsperf
