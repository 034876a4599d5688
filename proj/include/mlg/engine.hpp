#pragma once

// Reduction engine for the coordination core.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mlg/source.hpp"
#include "mlg/store.hpp"
#include "mlg/syntax.hpp"
#include "mlg/value.hpp"

namespace mlg {

using Pid = std::uint64_t;

struct ChannelScope {
    std::string name;
    ChannelSortPtr sort;
    unsigned depth = 0;  // 0 for declared channels, restriction nesting otherwise
    bool global = false;
    bool extruded = false;  // sent over another channel at least once
};

/// Everything a program defines at top level, shared by all configurations
/// derived from it.
struct Globals {
    ValueEnv env;  // computation definitions and declared channels
    std::map<std::string, ProcTermPtr> procs;
    std::set<const EnvNode*> nodes;  // the cells of `env`
    std::map<const ClosureData*, std::string> closure_names;
    std::map<ChannelId, ChannelScope> channels;
};

/// Evaluates the computation definitions in order and numbers the declared
/// channels from 0. Throws DiagnosticError on a runtime fault.
std::shared_ptr<const Globals> make_globals(const Program& program);

/// A soup member: always a prefix, a sum of prefixes, or a replication.
struct Process {
    Pid pid = 0;
    ProcTermPtr term;
    ValueEnv env;
    /// Set on pieces of a replication's unfolding until they first act.
    std::optional<Pid> copy_of;
};

enum class EventKind { comm, spawn, update, eval, deadlock, terminated, step_limit };

std::string_view to_string(EventKind kind);

struct TraceEvent {
    EventKind kind = EventKind::comm;
    std::uint64_t step = 0;
    std::vector<Pid> pids;
    std::string chan;
    std::string payload;
    std::string store_delta;
    std::uint64_t eval_steps = 0;  // eval events only
};

struct Configuration {
    std::vector<Process> soup;  // sorted by pid
    std::map<ChannelId, ChannelScope> channels;
    ObjectStore store;
    std::map<Pid, unsigned> spawns;  // unfoldings per replication
    std::uint64_t step_count = 0;
    Pid next_pid = 0;
    ChannelId next_channel = 0;
    std::uint64_t rng_state = 0;
    std::vector<TraceEvent> trace;
    /// Reduction events dropped from the front of `trace`.
    std::uint64_t trace_offset = 0;
    std::shared_ptr<const Globals> globals;

    bool all_nil() const { return soup.empty(); }
};

Configuration initial_configuration(std::shared_ptr<const Globals> globals, const ProcTermPtr& system,
                                    std::uint64_t seed = 0);
/// Program must have a system entry.
Configuration initial_configuration(const Program& program, std::uint64_t seed = 0);

/// One side of a communication: a soup member and the sum branches taken
/// to reach the prefix (0 = left, 1 = right).
struct Endpoint {
    Pid pid = 0;
    std::vector<std::uint8_t> path;
    friend bool operator==(const Endpoint&, const Endpoint&) = default;
    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct Redex {
    enum class Kind { comm, spawn };
    Kind kind = Kind::comm;
    Endpoint sender;
    Endpoint receiver;
    ChannelId chan = 0;
    Pid repl = 0;  // spawn only

    friend bool operator==(const Redex&, const Redex&) = default;
};

Redex comm_redex(Endpoint sender, Endpoint receiver, ChannelId chan);
Redex spawn_redex(Pid repl);

/// Canonical order: communications by (sender, receiver, channel), then
/// spawns by pid. Throws DiagnosticError if a guard faults.
std::vector<Redex> enabled_redexes(const Configuration& config);

/// Validates that `redex` is enabled, then applies it. A stale redex or a
/// runtime fault throws DiagnosticError and leaves `config` unspecified.
void step(Configuration& config, const Redex& redex);

/// Applies a redex known to come from enabled_redexes(config).
void apply_redex(Configuration& config, const Redex& redex);

const Process* find_process(const Configuration& config, Pid pid);
/// The Prefix node reached by following `path` through sums.
const ProcTerm* branch_at(const ProcTerm& term, const std::vector<std::uint8_t>& path);

enum class Verdict { terminated, deadlock, step_limit, fault };

std::string_view to_string(Verdict v);

struct RunResult {
    Configuration final;
    Verdict verdict = Verdict::terminated;
    std::optional<Diagnostic> fault;
};

/// Picks uniformly among enabled redexes with the seeded generator until
/// the soup is empty, nothing is enabled, or `max_steps` steps were taken.
RunResult run(Configuration config, std::uint64_t max_steps);
RunResult run(const Program& program, std::uint64_t seed, std::uint64_t max_steps);

/// Uniform draw in [0, bound) advancing `state`; bound must be positive.
std::uint64_t uniform_index(std::uint64_t& state, std::uint64_t bound);

std::string render_channel(const Configuration& config, ChannelId id);
std::string render_value(const Configuration& config, const Value& v);

/// `#<step> <kind> <details>`, one event per line.
std::string trace_text(const std::vector<TraceEvent>& events);
std::string event_text(const TraceEvent& event);
/// One JSON object per line with fields step, kind, pids, chan, payload,
/// storeDelta.
std::string trace_records(const std::vector<TraceEvent>& events);

/// Empty when the configuration is well formed; otherwise descriptions of
/// the violated invariants.
std::vector<std::string> check_invariants(const Configuration& config);

}  // namespace mlg
