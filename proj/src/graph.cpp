#include "stsperf/graph.hpp"

#include <unordered_map>

#include "stsperf/error.hpp"

namespace stsperf {

RunGraph build_run_graph(const StsModel& model) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < model.states.size(); ++i)
        index.emplace(model.states[i], i); // first declaration wins

    auto resolve = [&](const std::string& id) {
        auto it = index.find(id);
        if (it == index.end()) throw StsError("UnknownState", "state '" + id + "' is not declared");
        return it->second;
    };

    RunGraph g;
    g.node_ids = model.states;
    g.node_is_stop.assign(model.states.size(), 0);
    for (const auto& id : model.stop) g.node_is_stop[resolve(id)] = 1;
    g.start_node = resolve(model.start);

    if (g.node_is_stop[g.start_node]) {
        g.split = true;
        g.node_is_stop[g.start_node] = 0;
        g.node_ids.push_back(model.start);
        g.node_is_stop.push_back(1);
    }
    const std::size_t virtual_stop = g.node_ids.size() - 1; // only meaningful when split

    g.node_outgoing.resize(g.node_count());
    g.transition_source.reserve(model.transitions.size());
    g.transition_target.reserve(model.transitions.size());
    for (std::size_t i = 0; i < model.transitions.size(); ++i) {
        const auto& t = model.transitions[i];
        std::size_t src = resolve(t.from);
        std::size_t dst = resolve(t.to);
        if (g.split && dst == g.start_node) dst = virtual_stop;
        g.transition_source.push_back(src);
        g.transition_target.push_back(dst);
        if (!g.node_is_stop[src]) g.node_outgoing[src].push_back(i);
    }
    return g;
}

std::vector<char> reachable_from_start(const RunGraph& g) {
    std::vector<char> seen(g.node_count(), 0);
    std::vector<std::size_t> stack{g.start_node};
    seen[g.start_node] = 1;
    while (!stack.empty()) {
        std::size_t node = stack.back();
        stack.pop_back();
        for (std::size_t t : g.node_outgoing[node]) {
            std::size_t dst = g.transition_target[t];
            if (!seen[dst]) {
                seen[dst] = 1;
                stack.push_back(dst);
            }
        }
    }
    return seen;
}

std::optional<std::string> find_cycle(const RunGraph& g) {
    // Iterative colored DFS: 1 = on the current path, 2 = finished.
    std::vector<char> color(g.node_count(), 0);
    struct Frame {
        std::size_t node;
        std::size_t next = 0; // position within node_outgoing
    };
    std::vector<Frame> stack{{g.start_node}};
    color[g.start_node] = 1;
    while (!stack.empty()) {
        Frame& f = stack.back();
        const auto& out = g.node_outgoing[f.node];
        if (f.next == out.size()) {
            color[f.node] = 2;
            stack.pop_back();
            continue;
        }
        std::size_t dst = g.transition_target[out[f.next++]];
        if (color[dst] == 1) return g.node_ids[dst];
        if (color[dst] == 0) {
            color[dst] = 1;
            stack.push_back({dst});
        }
    }
    return std::nullopt;
}

std::vector<char> can_reach_stop(const RunGraph& g) {
    std::vector<std::vector<std::size_t>> reverse(g.node_count());
    for (std::size_t node = 0; node < g.node_count(); ++node)
        for (std::size_t t : g.node_outgoing[node]) reverse[g.transition_target[t]].push_back(node);

    std::vector<char> seen(g.node_count(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t node = 0; node < g.node_count(); ++node)
        if (g.node_is_stop[node]) {
            seen[node] = 1;
            stack.push_back(node);
        }
    while (!stack.empty()) {
        std::size_t node = stack.back();
        stack.pop_back();
        for (std::size_t pred : reverse[node])
            if (!seen[pred]) {
                seen[pred] = 1;
                stack.push_back(pred);
            }
    }
    return seen;
}

} // namespace stsperf
