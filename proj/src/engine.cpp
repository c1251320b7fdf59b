#include "stsperf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>

#include "stsperf/error.hpp"

namespace stsperf {

double sample_delay(const DelayDistribution& d, RngStream& rng) {
    switch (d.kind) {
    case DelayKind::Constant:
        return d.a;
    case DelayKind::Uniform:
        return sample_uniform(d.a, d.b, rng.next_unit());
    case DelayKind::Exponential:
        return sample_exponential(d.a, rng.next_unit());
    case DelayKind::TruncatedNormal: {
        if (d.b == 0) return d.a;
        for (;;) {
            const double u1 = rng.next_unit();
            const double u2 = rng.next_unit();
            const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
            const double z = radius * std::cos(2.0 * std::numbers::pi * u2);
            const double x = d.a + d.b * z;
            if (x >= 0) return x + 0.0;
        }
    }
    }
    return 0.0;
}

std::size_t pick_case(std::span<const double> probabilities, double u) {
    double cumulative = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        cumulative += probabilities[i];
        if (u < cumulative) return i;
    }
    return probabilities.size() - 1;
}

std::size_t choose_transition(std::span<const double> probabilities, RngStream& rng) {
    if (probabilities.size() == 1) return 0;
    return pick_case(probabilities, rng.next_unit());
}

namespace {

// Per-node probability vectors in document order, so the walk can hand
// choose_transition a contiguous span.
std::vector<std::vector<double>> outgoing_probabilities(const StsModel& model, const RunGraph& g) {
    std::vector<std::vector<double>> probs(g.node_count());
    for (std::size_t node = 0; node < g.node_count(); ++node) {
        probs[node].reserve(g.node_outgoing[node].size());
        for (std::size_t t : g.node_outgoing[node])
            probs[node].push_back(model.transitions[t].probability);
    }
    return probs;
}

RunRecord walk(const StsModel& model, const RunGraph& g,
               const std::vector<std::vector<double>>& probs, RngStream& rng,
               std::uint64_t max_steps) {
    RunRecord rec;
    std::size_t node = g.start_node;
    while (!g.node_is_stop[node]) {
        if (rec.steps == max_steps)
            throw StsError("NonTermination",
                           "run exceeded " + std::to_string(max_steps) + " steps at state '" +
                               g.node_ids[node] + "'");
        const auto& out = g.node_outgoing[node];
        if (out.empty())
            throw StsError("DeadEnd", "non-stop state '" + g.node_ids[node] +
                                          "' has no outgoing transition");
        const std::size_t pick = choose_transition(probs[node], rng);
        const std::size_t t = out[pick];
        rec.service_time += sample_delay(model.transitions[t].delay, rng);
        node = g.transition_target[t];
        ++rec.steps;
    }
    // Overheads draw after the service walk; the service draw sequence is
    // the same with or without them.
    double in = model.overhead_in ? sample_delay(*model.overhead_in, rng) : 0.0;
    double out = model.overhead_out ? sample_delay(*model.overhead_out, rng) : 0.0;
    rec.response_time = in + rec.service_time + out;
    return rec;
}

} // namespace

RunRecord simulate_run(const StsModel& model, const RunGraph& graph, RngStream& rng,
                       std::uint64_t max_steps) {
    return walk(model, graph, outgoing_probabilities(model, graph), rng, max_steps);
}

RunRecord simulate_run(const StsModel& model, RngStream& rng, std::uint64_t max_steps) {
    RunGraph graph = build_run_graph(model);
    return simulate_run(model, graph, rng, max_steps);
}

SimulationResult simulate(const StsModel& model, const SimulationConfig& cfg, unsigned threads) {
    const RunGraph graph = build_run_graph(model);
    const auto probs = outgoing_probabilities(model, graph);

    std::vector<RunRecord> records(cfg.runs);
    auto run_range = [&](std::uint64_t first, std::uint64_t last) {
        for (std::uint64_t i = first; i < last; ++i) {
            try {
                RngStream rng = RngStream::for_replication(cfg.seed, i);
                records[i] = walk(model, graph, probs, rng, cfg.max_steps);
                records[i].index = i;
            } catch (const StsError& e) {
                throw StsError(e.code(),
                               "replication " + std::to_string(i) + ": " + e.message());
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, cfg.runs));

    if (threads <= 1) {
        run_range(0, cfg.runs);
    } else {
        // Workers own disjoint index ranges of the presized record vector;
        // failures are collected and the lowest-index one is rethrown so the
        // outcome matches a sequential run.
        struct Failure {
            std::uint64_t index;
            std::string code;
            std::string message;
        };
        std::vector<std::optional<Failure>> failures(threads);
        std::vector<std::thread> workers;
        const std::uint64_t chunk = (cfg.runs + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::uint64_t first = std::min<std::uint64_t>(w * chunk, cfg.runs);
            const std::uint64_t last = std::min<std::uint64_t>(first + chunk, cfg.runs);
            workers.emplace_back([&, w, first, last] {
                for (std::uint64_t i = first; i < last; ++i) {
                    try {
                        RngStream rng = RngStream::for_replication(cfg.seed, i);
                        records[i] = walk(model, graph, probs, rng, cfg.max_steps);
                        records[i].index = i;
                    } catch (const StsError& e) {
                        failures[w] = Failure{i, e.code(), e.message()};
                        return;
                    }
                }
            });
        }
        for (auto& t : workers) t.join();
        const Failure* worst = nullptr;
        for (const auto& f : failures)
            if (f && (!worst || f->index < worst->index)) worst = &*f;
        if (worst)
            throw StsError(worst->code,
                           "replication " + std::to_string(worst->index) + ": " + worst->message);
    }

    std::vector<double> values(cfg.runs);
    for (std::uint64_t i = 0; i < cfg.runs; ++i)
        values[i] =
            cfg.measure == Measure::Service ? records[i].service_time : records[i].response_time;
    SimulationResult result;
    result.summary = summarize(values);
    result.records = std::move(records);
    return result;
}

SimulationSummary summarize(std::span<const double> values) {
    if (values.empty()) throw StsError("EmptyInput", "cannot summarize an empty sample");
    const std::uint64_t n = values.size();

    SimulationSummary s;
    s.count = n;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);

    if (n > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(sq / static_cast<double>(n - 1));
    }

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    auto nearest_rank = [&](double q) {
        auto rank = static_cast<std::uint64_t>(std::ceil(q * static_cast<double>(n)));
        rank = std::clamp<std::uint64_t>(rank, 1, n);
        return sorted[rank - 1];
    };
    s.p50 = nearest_rank(0.50);
    s.p90 = nearest_rank(0.90);
    s.p95 = nearest_rank(0.95);
    s.p99 = nearest_rank(0.99);
    s.ci95_halfwidth = 1.96 * s.std / std::sqrt(static_cast<double>(n));
    return s;
}

} // namespace stsperf
