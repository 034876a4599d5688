#include "mlg/explorer.hpp"

#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace mlg {

namespace {

std::string edge_label(const std::vector<TraceEvent>& events) {
    for (const TraceEvent& e : events) {
        if (e.kind == EventKind::comm) return "comm " + e.chan + " " + e.payload;
        if (e.kind == EventKind::spawn) return "spawn p" + std::to_string(e.pids.at(0));
    }
    return "?";
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        if (ch == '\x01' || ch == '\x02') continue;
        out += ch;
    }
    return out;
}

}  // namespace

bool StateGraph::has_frontier() const {
    for (const StateNode& s : states) {
        if (s.flags.frontier) return true;
    }
    return false;
}

std::optional<std::size_t> StateGraph::find(const CanonicalState& key) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].key == key) return i;
    }
    return std::nullopt;
}

StateGraph explore(const Configuration& initial, const ExploreLimits& limits, const StateObserver& observe) {
    StateGraph g;
    std::map<CanonicalState, std::size_t> index;
    std::deque<std::pair<std::size_t, Configuration>> queue;

    auto add_state = [&](const Configuration& c, CanonicalState key, std::uint64_t depth) {
        std::size_t id = g.states.size();
        StateNode node;
        node.key = key;
        node.depth = depth;
        node.flags.terminal = c.all_nil();
        g.states.push_back(std::move(node));
        index.emplace(std::move(key), id);
        if (observe) observe(id, c);
        return id;
    };

    Configuration start = initial;
    start.trace_offset = start.step_count;
    start.trace.clear();
    queue.emplace_back(add_state(start, canonicalize(start), 0), std::move(start));

    std::set<std::tuple<std::size_t, std::string, std::size_t>> seen_edges;
    while (!queue.empty()) {
        auto [id, config] = std::move(queue.front());
        queue.pop_front();
        if (config.all_nil()) continue;

        std::vector<Redex> redexes = enabled_redexes(config);
        bool withheld = false;
        if (g.states[id].depth >= limits.max_depth) {
            withheld = !redexes.empty();
        } else {
            for (const Redex& r : redexes) {
                if (r.kind == Redex::Kind::spawn) {
                    auto it = config.spawns.find(r.repl);
                    if (it != config.spawns.end() && it->second >= limits.repl_budget) {
                        withheld = true;
                        continue;
                    }
                }
                Configuration next = config;
                apply_redex(next, r);
                std::vector<TraceEvent> events = std::move(next.trace);
                next.trace.clear();
                next.trace_offset = next.step_count;

                CanonicalState key = canonicalize(next);
                std::size_t to;
                auto hit = index.find(key);
                if (hit != index.end()) {
                    to = hit->second;
                } else if (g.states.size() >= limits.max_states) {
                    withheld = true;
                    continue;
                } else {
                    to = add_state(next, std::move(key), g.states[id].depth + 1);
                    queue.emplace_back(to, std::move(next));
                }
                std::string label = edge_label(events);
                if (!seen_edges.emplace(id, label, to).second) continue;
                std::size_t e = g.edges.size();
                g.edges.push_back(StateEdge{id, to, std::move(label), std::move(events)});
                g.states[id].out.push_back(e);
                if (!g.states[to].parent_edge && to != 0) g.states[to].parent_edge = e;
            }
        }
        StateFlags& f = g.states[id].flags;
        f.frontier = withheld;
        f.deadlock = redexes.empty();
        if (f.deadlock) {
            for (const Process& p : config.soup) g.states[id].stuck.push_back(p.pid);
        }
    }
    return g;
}

StateGraph explore(const Program& program, const ExploreLimits& limits, const StateObserver& observe) {
    return explore(initial_configuration(program), limits, observe);
}

std::vector<DeadlockWitness> find_deadlocks(const StateGraph& g) {
    std::vector<DeadlockWitness> out;
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        if (!g.states[i].flags.deadlock) continue;
        DeadlockWitness w{i, {}};
        for (std::size_t s = i; g.states[s].parent_edge;) {
            std::size_t e = *g.states[s].parent_edge;
            w.path.push_back(e);
            s = g.edges[e].from;
        }
        std::reverse(w.path.begin(), w.path.end());
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<TraceEvent> witness_events(const StateGraph& g, const DeadlockWitness& w) {
    std::vector<TraceEvent> out;
    for (std::size_t e : w.path) out.insert(out.end(), g.edges[e].events.begin(), g.edges[e].events.end());
    out.push_back(TraceEvent{EventKind::deadlock, w.path.size(), g.states[w.state].stuck, {}, {}, {}, 0});
    return out;
}

std::string to_dot(const StateGraph& g) {
    std::string out = "digraph states {\n";
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        const StateNode& s = g.states[i];
        std::string flags;
        if (s.flags.deadlock) flags += " deadlock";
        if (s.flags.terminal) flags += " terminal";
        if (s.flags.frontier) flags += " frontier";
        out += "  s" + std::to_string(i) + " [label=\"s" + std::to_string(i) + "\\n" + escape(s.key.text) +
               "\", depth=" + std::to_string(s.depth) + ", flags=\"" + (flags.empty() ? "" : flags.substr(1)) + "\"";
        if (s.flags.deadlock) out += ", color=red";
        if (s.flags.terminal) out += ", color=green";
        if (s.flags.frontier) out += ", style=dashed";
        out += "];\n";
    }
    for (const StateEdge& e : g.edges) {
        out += "  s" + std::to_string(e.from) + " -> s" + std::to_string(e.to) + " [label=\"" + escape(e.label) +
               "\"];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace mlg
