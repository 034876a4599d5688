#pragma once

// Bounded breadth-first exploration of every interleaving of a system.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mlg/canonical.hpp"
#include "mlg/engine.hpp"

namespace mlg {

struct ExploreLimits {
    std::uint64_t max_depth = 32;
    std::uint64_t max_states = 100000;
    unsigned repl_budget = 2;  // unfoldings per replication along one path
};

struct StateFlags {
    bool deadlock = false;
    bool terminal = false;
    bool frontier = false;  // some successor was withheld by a budget
};

struct StateNode {
    CanonicalState key;
    std::uint64_t depth = 0;
    StateFlags flags;
    std::vector<std::size_t> out;               // edge indices
    std::optional<std::size_t> parent_edge;     // first edge that reached it
    std::vector<Pid> stuck;  // soup pids of a deadlock state
};

struct StateEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::string label;
    std::vector<TraceEvent> events;
};

struct StateGraph {
    std::vector<StateNode> states;  // states[0] is the initial state
    std::vector<StateEdge> edges;

    bool has_frontier() const;
    std::optional<std::size_t> find(const CanonicalState& key) const;
};

/// Called once per discovered state with its index and a configuration
/// that reaches it.
using StateObserver = std::function<void(std::size_t, const Configuration&)>;

StateGraph explore(const Configuration& initial, const ExploreLimits& limits = {},
                   const StateObserver& observe = {});
StateGraph explore(const Program& program, const ExploreLimits& limits = {}, const StateObserver& observe = {});

struct DeadlockWitness {
    std::size_t state = 0;
    std::vector<std::size_t> path;  // edge indices from the initial state
};

/// Each deadlock state once, with a shortest path reaching it.
std::vector<DeadlockWitness> find_deadlocks(const StateGraph& graph);

/// Events along a witness path, ending with the deadlock event.
std::vector<TraceEvent> witness_events(const StateGraph& graph, const DeadlockWitness& witness);

/// Graphviz description: one node per state with its flags, labelled edges.
std::string to_dot(const StateGraph& graph);

}  // namespace mlg
