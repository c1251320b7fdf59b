#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stsperf/model.hpp"

namespace stsperf {

// Execution-order view of a model: the graph a run actually walks.
//
// Stop states absorb (a run halts on entering one), so their outgoing
// transitions are dropped here. When the start state is itself a stop state,
// a virtual stop node is appended and every transition into the start is
// redirected to it; the start node then acts as a plain entry state. This is
// the node-splitting that makes start-equals-stop models (re-entry
// semantics) well-posed for analysis, and the engine walks the same graph so
// the two can never disagree.
struct RunGraph {
    // Nodes 0..model.states.size()-1 follow declaration order (first
    // declaration wins for duplicate ids); the optional virtual stop is the
    // last node and reports the start state's id.
    std::vector<std::string> node_ids;
    std::vector<char> node_is_stop;
    // Transition indices into model.transitions, document order. Empty for
    // stop nodes.
    std::vector<std::vector<std::size_t>> node_outgoing;
    std::vector<std::size_t> transition_source;
    std::vector<std::size_t> transition_target;
    std::size_t start_node = 0;
    bool split = false;

    std::size_t node_count() const { return node_ids.size(); }
};

// Throws StsError("UnknownState") if the start, a stop member, or a
// transition endpoint is not a declared state. Validated models qualify.
RunGraph build_run_graph(const StsModel& model);

// Per-node flags; both walk only the run edges in node_outgoing.
std::vector<char> reachable_from_start(const RunGraph& g);
std::vector<char> can_reach_stop(const RunGraph& g);

// Id of some node on a cycle reachable from the start, or nullopt if the
// reachable part of the graph is acyclic.
std::optional<std::string> find_cycle(const RunGraph& g);

} // namespace stsperf
