#include "mlg/engine.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

#include "mlg/eval.hpp"
#include "mlg/pretty.hpp"

namespace mlg {

namespace {

[[noreturn]] void fault(const Span& span, std::string message) {
    throw DiagnosticError(Diagnostic{DiagKind::runtime, Severity::error, span, std::move(message)});
}

bool is_nil(const ProcTerm& t) { return std::holds_alternative<ProcTerm::Nil>(t.node); }

ProcTermPtr prune_sum(const ProcTermPtr& t) {
    const auto* s = std::get_if<ProcTerm::Sum>(&t->node);
    if (!s) return t;
    ProcTermPtr l = prune_sum(s->left);
    ProcTermPtr r = prune_sum(s->right);
    if (is_nil(*l)) return r;
    if (is_nil(*r)) return l;
    if (l.get() == s->left.get() && r.get() == s->right.get()) return t;
    return ProcTermPtr::make(ProcTerm::Sum{l, r}, t->span);
}

ChannelId resolve_chan(const Name& name, const ValueEnv& env, const Span& span) {
    const Value* v = env.lookup(name.text);
    if (!v) fault(span, "unbound channel '" + name.text + "'");
    const ChanRef* c = v->as_chan();
    if (!c) fault(span, "'" + name.text + "' is not a channel");
    return c->id;
}

Value guard_value(const Payload& p, const ValueEnv& env, const ObjectStore& store) {
    if (const auto* c = std::get_if<Payload::ChanName>(&p.node)) return Value::chan(resolve_chan(c->name, env, p.span));
    if (const auto* e = std::get_if<Payload::Comp>(&p.node)) return eval_comp(env, store, *e->expr).value;
    fault(p.span, "object expressions cannot appear in a match guard");
}

bool guard_passes(const ProcAction::Match& m, const ValueEnv& env, const ObjectStore& store, const Span& span) {
    Value a = guard_value(m.left, env, store);
    Value b = guard_value(m.right, env, store);
    if (a.as_closure() || b.as_closure()) fault(span, "functions cannot be compared in a match");
    if (a.v.index() != b.v.index()) fault(span, "match compares values of different categories");
    return same_value(a, b);
}

struct Offer {
    std::size_t member = 0;
    std::vector<std::uint8_t> path;
    bool send = false;
    ChannelId chan = 0;
};

void collect_offers(const ProcTerm& t, const ValueEnv& env, const ObjectStore& store, std::size_t member,
                    std::vector<std::uint8_t>& path, std::vector<Offer>& out) {
    if (const auto* p = std::get_if<ProcTerm::Prefix>(&t.node)) {
        const ProcAction* a = p->action.get();
        while (const auto* m = std::get_if<ProcAction::Match>(&a->node)) {
            if (!guard_passes(*m, env, store, a->span)) return;
            a = m->inner.get();
        }
        if (const auto* s = std::get_if<ProcAction::Send>(&a->node)) {
            out.push_back(Offer{member, path, true, resolve_chan(s->chan, env, a->span)});
        } else {
            const auto& r = std::get<ProcAction::Receive>(a->node);
            out.push_back(Offer{member, path, false, resolve_chan(r.chan, env, a->span)});
        }
    } else if (const auto* s = std::get_if<ProcTerm::Sum>(&t.node)) {
        path.push_back(0);
        collect_offers(*s->left, env, store, member, path, out);
        path.back() = 1;
        collect_offers(*s->right, env, store, member, path, out);
        path.pop_back();
    } else if (!is_nil(t)) {
        fault(t.span, "sum operand is not guarded by a prefix");
    }
}

void member_offers(const Process& p, const ObjectStore& store, std::size_t index, std::vector<Offer>& out) {
    if (std::holds_alternative<ProcTerm::Repl>(p.term->node)) return;
    std::vector<std::uint8_t> path;
    collect_offers(*p.term, p.env, store, index, path, out);
}

// Turns a process term into soup members: drops 0, flattens |, opens
// restrictions with fresh channels and expands process references.
struct Placer {
    const Globals& globals;
    Pid& next_pid;
    ChannelId& next_channel;
    std::map<ChannelId, ChannelScope>* channels;  // null for a dry run
    std::optional<Pid> keep;
    std::optional<Pid> copy_of;
    std::vector<Process> out;

    void place(const ProcTermPtr& t, const ValueEnv& env, unsigned depth) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ProcTerm::Nil>) {
                } else if constexpr (std::is_same_v<T, ProcTerm::Par>) {
                    place(n.left, env, depth);
                    place(n.right, env, depth);
                } else if constexpr (std::is_same_v<T, ProcTerm::Restrict>) {
                    ChannelId id = next_channel++;
                    if (channels) (*channels)[id] = ChannelScope{n.chan.text, n.sort, depth + 1, false, false};
                    place(n.body, env.extend(n.chan.text, Value::chan(id)), depth + 1);
                } else if constexpr (std::is_same_v<T, ProcTerm::Call>) {
                    auto it = globals.procs.find(n.name.text);
                    if (it == globals.procs.end()) fault(t->span, "unknown process '" + n.name.text + "'");
                    place(it->second, globals.env, depth);
                } else if constexpr (std::is_same_v<T, ProcTerm::Sum>) {
                    ProcTermPtr pruned = prune_sum(t);
                    if (!is_nil(*pruned)) add(pruned, env);
                } else {
                    add(t, env);
                }
            },
            t->node);
    }

    void add(const ProcTermPtr& t, const ValueEnv& env) {
        Pid pid;
        if (keep) {
            pid = *keep;
            keep.reset();
        } else {
            pid = next_pid++;
        }
        out.push_back(Process{pid, t, env, copy_of});
    }
};

void insert_members(Configuration& c, std::vector<Process> members) {
    for (Process& p : members) c.soup.push_back(std::move(p));
    std::sort(c.soup.begin(), c.soup.end(), [](const Process& a, const Process& b) { return a.pid < b.pid; });
}

std::size_t index_of(const Configuration& c, Pid pid) {
    auto it = std::lower_bound(c.soup.begin(), c.soup.end(), pid,
                               [](const Process& p, Pid v) { return p.pid < v; });
    if (it == c.soup.end() || it->pid != pid) fault({}, "no process p" + std::to_string(pid));
    return static_cast<std::size_t>(it - c.soup.begin());
}

bool pairs_with(const std::vector<Offer>& a, const std::vector<Offer>& b, bool same_list, ChannelId real_limit) {
    for (const Offer& x : a) {
        if (x.chan >= real_limit) continue;
        for (const Offer& y : b) {
            if (x.send == y.send || x.chan != y.chan) continue;
            if (same_list && x.member == y.member) continue;
            return true;
        }
    }
    return false;
}

std::vector<Offer> all_offers(const Configuration& c) {
    std::vector<Offer> offers;
    for (std::size_t i = 0; i < c.soup.size(); ++i) member_offers(c.soup[i], c.store, i, offers);
    return offers;
}

std::vector<Offer> dry_unfolding(const Configuration& c, const Process& repl, ChannelId channel_base) {
    Pid pid = 0;
    ChannelId chan = channel_base;
    Placer placer{*c.globals, pid, chan, nullptr, std::nullopt, std::nullopt, {}};
    placer.place(std::get<ProcTerm::Repl>(repl.term->node).body, repl.env, 0);
    std::vector<Offer> offers;
    for (std::size_t i = 0; i < placer.out.size(); ++i) member_offers(placer.out[i], c.store, i, offers);
    return offers;
}

std::vector<Redex> spawn_redexes(const Configuration& c, const std::vector<Offer>& existing) {
    std::vector<std::size_t> repls;
    for (std::size_t i = 0; i < c.soup.size(); ++i) {
        if (std::holds_alternative<ProcTerm::Repl>(c.soup[i].term->node)) repls.push_back(i);
    }
    if (repls.empty()) return {};

    const ChannelId real = c.next_channel;
    const ChannelId any = std::numeric_limits<ChannelId>::max();
    std::vector<std::vector<Offer>> copies;
    std::vector<bool> has_idle;
    for (std::size_t k = 0; k < repls.size(); ++k) {
        copies.push_back(dry_unfolding(c, c.soup[repls[k]], real + (ChannelId{1} << 40) * (k + 1)));
        Pid pid = c.soup[repls[k]].pid;
        has_idle.push_back(std::any_of(c.soup.begin(), c.soup.end(),
                                       [&](const Process& p) { return p.copy_of == pid; }));
    }

    std::vector<Redex> out;
    for (std::size_t k = 0; k < repls.size(); ++k) {
        const Pid pid = c.soup[repls[k]].pid;
        const std::vector<Offer>& copy = copies[k];
        bool eligible = false;
        if (has_idle[k]) {
            // Only unfold again when every waiting copy is stuck.
            bool idle_busy = false;
            for (const Offer& x : existing) {
                if (c.soup[x.member].copy_of != pid) continue;
                for (const Offer& y : existing) {
                    if (x.send != y.send && x.chan == y.chan && x.member != y.member) idle_busy = true;
                }
            }
            eligible = !idle_busy && (pairs_with(copy, existing, false, any) || pairs_with(copy, copy, true, any));
        } else {
            eligible = pairs_with(copy, existing, false, any) || pairs_with(copy, copy, true, any) ||
                       pairs_with(copy, copy, false, real);
            for (std::size_t j = 0; !eligible && j < repls.size(); ++j) {
                if (j != k && !has_idle[j]) eligible = pairs_with(copy, copies[j], false, real);
            }
        }
        if (eligible) out.push_back(spawn_redex(pid));
    }
    return out;
}

bool value_fits(const Configuration& c, const Value& v, const ChannelSort& sort) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ChannelSort::CarriesChan>) {
                const ChanRef* r = v.as_chan();
                if (!r) return false;
                auto it = c.channels.find(r->id);
                return it != c.channels.end() && it->second.sort == s.inner;
            } else if constexpr (std::is_same_v<T, ChannelSort::CarriesNat>) {
                return v.as_nat() != nullptr;
            } else if constexpr (std::is_same_v<T, ChannelSort::CarriesFn>) {
                return inhabits(v, *s.type, c.store);
            } else {
                return inhabits(v, CompType{CompType::Obj{s.signature}}, c.store);
            }
        },
        sort.node);
}

const ProcAction& strip_guards(const ProcAction& a) {
    const ProcAction* p = &a;
    while (const auto* m = std::get_if<ProcAction::Match>(&p->node)) p = m->inner.get();
    return *p;
}

void apply_spawn(Configuration& c, Pid repl) {
    const Process& r = c.soup[index_of(c, repl)];
    const auto& body = std::get<ProcTerm::Repl>(r.term->node).body;
    Placer placer{*c.globals, c.next_pid, c.next_channel, &c.channels, std::nullopt, repl, {}};
    placer.place(body, r.env, 0);
    TraceEvent ev{EventKind::spawn, c.step_count + 1, {repl}, {}, {}, {}, 0};
    for (const Process& p : placer.out) ev.pids.push_back(p.pid);
    insert_members(c, std::move(placer.out));
    ++c.spawns[repl];
    ++c.step_count;
    c.trace.push_back(std::move(ev));
}

void apply_comm(Configuration& c, const Redex& r) {
    const std::uint64_t step_no = c.step_count + 1;
    const Process sender = c.soup[index_of(c, r.sender.pid)];
    const Process receiver = c.soup[index_of(c, r.receiver.pid)];
    const ProcTerm* sp = branch_at(*sender.term, r.sender.path);
    const ProcTerm* rp = branch_at(*receiver.term, r.receiver.path);
    if (!sp || !rp) fault({}, "redex does not address a prefix");
    const auto& sprefix = std::get<ProcTerm::Prefix>(sp->node);
    const auto& rprefix = std::get<ProcTerm::Prefix>(rp->node);
    const auto* send = std::get_if<ProcAction::Send>(&strip_guards(*sprefix.action).node);
    const auto* recv = std::get_if<ProcAction::Receive>(&strip_guards(*rprefix.action).node);
    if (!send || !recv) fault({}, "redex does not pair a send with a receive");

    auto scope = c.channels.find(r.chan);
    if (scope == c.channels.end()) fault(sp->span, "unknown channel id " + std::to_string(r.chan));
    const ChannelSort& sort = *scope->second.sort;

    Value value;
    const Payload& payload = send->payload;
    if (const auto* n = std::get_if<Payload::ChanName>(&payload.node)) {
        value = Value::chan(resolve_chan(n->name, sender.env, payload.span));
    } else if (const auto* e = std::get_if<Payload::Comp>(&payload.node)) {
        EvalResult res = eval_comp(sender.env, c.store, *e->expr);
        value = std::move(res.value);
        if (res.steps > 0) {
            c.trace.push_back(TraceEvent{EventKind::eval, step_no, {sender.pid}, render_channel(c, r.chan),
                                         render_value(c, value), {}, res.steps});
        }
    } else {
        const auto& d = std::get<Payload::Data>(payload.node);
        const auto* obj_sort = std::get_if<ChannelSort::CarriesObj>(&sort.node);
        EvalResult res = eval_data(sender.env, c.store, *d.expr, obj_sort ? &obj_sort->signature : nullptr);
        value = std::move(res.value);
        const StoredObject* obj = c.store.find(value.as_obj()->id);
        c.trace.push_back(TraceEvent{EventKind::update, step_no, {sender.pid}, render_channel(c, r.chan), {},
                                     render_object(*obj), res.steps});
    }
    if (!value_fits(c, value, sort)) {
        fault(payload.span, "payload " + render_value(c, value) + " does not fit the sort " + pretty(sort) +
                                " of channel " + render_channel(c, r.chan));
    }
    if (const ChanRef* sent = value.as_chan()) {
        auto it = c.channels.find(sent->id);
        if (it != c.channels.end() && !it->second.global) it->second.extruded = true;
    }
    std::string rendered = render_value(c, value);

    c.soup.erase(c.soup.begin() + static_cast<std::ptrdiff_t>(index_of(c, sender.pid)));
    c.soup.erase(c.soup.begin() + static_cast<std::ptrdiff_t>(index_of(c, receiver.pid)));
    Placer placer{*c.globals, c.next_pid, c.next_channel, &c.channels, sender.pid, std::nullopt, {}};
    placer.place(sprefix.continuation, sender.env, 0);
    placer.keep = receiver.pid;
    placer.place(rprefix.continuation, receiver.env.extend(recv->binder.text, value), 0);
    insert_members(c, std::move(placer.out));

    ++c.step_count;
    c.trace.push_back(TraceEvent{EventKind::comm, step_no, {sender.pid, receiver.pid}, render_channel(c, r.chan),
                                 std::move(rendered), {}, 0});
}

std::string pid_text(Pid p) { return "p" + std::to_string(p); }

}  // namespace

std::shared_ptr<const Globals> make_globals(const Program& program) {
    auto g = std::make_shared<Globals>();
    ObjectStore store;
    ChannelId next = 0;
    for (const Item& item : program.items) {
        if (const auto* def = std::get_if<CompDef>(&item)) {
            Value v = eval_comp(g->env, store, *def->expr).value;
            if (const ClosureData* clo = v.as_closure()) g->closure_names.emplace(clo, def->name.text);
            g->env = g->env.extend(def->name.text, std::move(v));
        } else if (const auto* chan = std::get_if<ChanDecl>(&item)) {
            ChannelId id = next++;
            g->channels[id] = ChannelScope{chan->name.text, chan->sort, 0, true, false};
            g->env = g->env.extend(chan->name.text, Value::chan(id));
        } else {
            const auto& proc = std::get<ProcDef>(item);
            g->procs[proc.name.text] = proc.body;
        }
    }
    for (const EnvNode* n = g->env.head(); n; n = n->next.get()) g->nodes.insert(n);
    return g;
}

Configuration initial_configuration(std::shared_ptr<const Globals> globals, const ProcTermPtr& system,
                                    std::uint64_t seed) {
    Configuration c;
    c.globals = std::move(globals);
    c.channels = c.globals->channels;
    c.next_channel = c.channels.empty() ? 0 : c.channels.rbegin()->first + 1;
    c.rng_state = seed;
    Placer placer{*c.globals, c.next_pid, c.next_channel, &c.channels, std::nullopt, std::nullopt, {}};
    placer.place(system, c.globals->env, 0);
    insert_members(c, std::move(placer.out));
    return c;
}

Configuration initial_configuration(const Program& program, std::uint64_t seed) {
    if (!program.system) throw std::invalid_argument("program has no system entry");
    return initial_configuration(make_globals(program), program.system, seed);
}

Redex comm_redex(Endpoint sender, Endpoint receiver, ChannelId chan) {
    Redex r;
    r.kind = Redex::Kind::comm;
    r.sender = std::move(sender);
    r.receiver = std::move(receiver);
    r.chan = chan;
    return r;
}

Redex spawn_redex(Pid repl) {
    Redex r;
    r.kind = Redex::Kind::spawn;
    r.repl = repl;
    return r;
}

std::vector<Redex> enabled_redexes(const Configuration& c) {
    std::vector<Offer> offers = all_offers(c);
    std::vector<Redex> out;
    for (const Offer& s : offers) {
        if (!s.send) continue;
        for (const Offer& r : offers) {
            if (r.send || r.chan != s.chan || r.member == s.member) continue;
            out.push_back(comm_redex(Endpoint{c.soup[s.member].pid, s.path}, Endpoint{c.soup[r.member].pid, r.path},
                                     s.chan));
        }
    }
    for (Redex& r : spawn_redexes(c, offers)) out.push_back(std::move(r));
    return out;
}

void apply_redex(Configuration& c, const Redex& r) {
    if (r.kind == Redex::Kind::spawn) {
        apply_spawn(c, r.repl);
    } else {
        apply_comm(c, r);
    }
}

void step(Configuration& c, const Redex& r) {
    std::vector<Redex> enabled = enabled_redexes(c);
    if (std::find(enabled.begin(), enabled.end(), r) == enabled.end()) {
        fault({}, "stale redex: not enabled in this configuration");
    }
    apply_redex(c, r);
}

const Process* find_process(const Configuration& c, Pid pid) {
    for (const Process& p : c.soup) {
        if (p.pid == pid) return &p;
    }
    return nullptr;
}

const ProcTerm* branch_at(const ProcTerm& term, const std::vector<std::uint8_t>& path) {
    const ProcTerm* t = &term;
    for (std::uint8_t dir : path) {
        const auto* s = std::get_if<ProcTerm::Sum>(&t->node);
        if (!s) return nullptr;
        t = dir == 0 ? s->left.get() : s->right.get();
    }
    return std::holds_alternative<ProcTerm::Prefix>(t->node) ? t : nullptr;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::comm: return "comm";
        case EventKind::spawn: return "spawn";
        case EventKind::update: return "update";
        case EventKind::eval: return "eval";
        case EventKind::deadlock: return "deadlock";
        case EventKind::terminated: return "terminated";
        case EventKind::step_limit: return "step-limit";
    }
    return "?";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::terminated: return "terminated";
        case Verdict::deadlock: return "deadlock";
        case Verdict::step_limit: return "step-limit";
        case Verdict::fault: return "fault";
    }
    return "?";
}

std::uint64_t uniform_index(std::uint64_t& state, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_index: empty range");
    // splitmix64 with rejection to avoid modulo bias
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        if (z >= threshold) return z % bound;
    }
}

RunResult run(Configuration config, std::uint64_t max_steps) {
    RunResult result;
    try {
        for (;;) {
            if (config.all_nil()) {
                result.verdict = Verdict::terminated;
                config.trace.push_back(TraceEvent{EventKind::terminated, config.step_count, {}, {}, {}, {}, 0});
                break;
            }
            std::vector<Redex> enabled = enabled_redexes(config);
            if (enabled.empty()) {
                result.verdict = Verdict::deadlock;
                TraceEvent ev{EventKind::deadlock, config.step_count, {}, {}, {}, {}, 0};
                for (const Process& p : config.soup) ev.pids.push_back(p.pid);
                config.trace.push_back(std::move(ev));
                break;
            }
            if (config.step_count >= max_steps) {
                result.verdict = Verdict::step_limit;
                config.trace.push_back(TraceEvent{EventKind::step_limit, config.step_count, {}, {}, {}, {}, 0});
                break;
            }
            apply_redex(config, enabled[uniform_index(config.rng_state, enabled.size())]);
#ifndef NDEBUG
            if (auto broken = check_invariants(config); !broken.empty()) fault({}, "invariant: " + broken.front());
#endif
        }
    } catch (const DiagnosticError& err) {
        result.verdict = Verdict::fault;
        result.fault = err.diagnostic();
    }
    result.final = std::move(config);
    return result;
}

RunResult run(const Program& program, std::uint64_t seed, std::uint64_t max_steps) {
    return run(initial_configuration(program, seed), max_steps);
}

std::string render_channel(const Configuration& c, ChannelId id) {
    auto it = c.channels.find(id);
    if (it == c.channels.end()) return "chan#" + std::to_string(id);
    if (it->second.global) return it->second.name;
    return it->second.name + "#" + std::to_string(id);
}

std::string render_value(const Configuration& c, const Value& v) {
    if (const ChanRef* ch = v.as_chan()) return render_channel(c, ch->id);
    if (const ClosureData* clo = v.as_closure(); clo && c.globals) {
        auto it = c.globals->closure_names.find(clo);
        if (it != c.globals->closure_names.end()) return it->second;
    }
    return to_string(v);
}

std::string event_text(const TraceEvent& e) {
    std::string out = "#" + std::to_string(e.step) + " " + std::string(to_string(e.kind));
    switch (e.kind) {
        case EventKind::comm:
            out += " " + e.chan + " " + pid_text(e.pids.at(0)) + " -> " + pid_text(e.pids.at(1)) +
                   " payload=" + e.payload;
            break;
        case EventKind::spawn:
            out += " " + pid_text(e.pids.at(0)) + " ->";
            for (std::size_t i = 1; i < e.pids.size(); ++i) out += " " + pid_text(e.pids[i]);
            break;
        case EventKind::eval:
            out += " " + pid_text(e.pids.at(0)) + " " + e.chan + " steps=" + std::to_string(e.eval_steps) +
                   " value=" + e.payload;
            break;
        case EventKind::update:
            out += " " + pid_text(e.pids.at(0)) + " " + e.store_delta;
            break;
        case EventKind::deadlock:
            out += " stuck=";
            for (std::size_t i = 0; i < e.pids.size(); ++i) out += (i ? "," : "") + pid_text(e.pids[i]);
            break;
        case EventKind::terminated:
        case EventKind::step_limit:
            break;
    }
    return out;
}

std::string trace_text(const std::vector<TraceEvent>& events) {
    std::string out;
    for (const TraceEvent& e : events) out += event_text(e) + "\n";
    return out;
}

std::string trace_records(const std::vector<TraceEvent>& events) {
    std::string out;
    for (const TraceEvent& e : events) {
        nlohmann::ordered_json j;
        j["step"] = e.step;
        j["kind"] = std::string(to_string(e.kind));
        j["pids"] = e.pids;
        j["chan"] = e.chan.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(e.chan);
        j["payload"] = e.payload.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(e.payload);
        j["storeDelta"] = e.store_delta.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(e.store_delta);
        if (e.kind == EventKind::eval || e.kind == EventKind::update) j["evalSteps"] = e.eval_steps;
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<std::string> check_invariants(const Configuration& c) {
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < c.soup.size(); ++i) {
        const Process& p = c.soup[i];
        if (i > 0 && c.soup[i - 1].pid >= p.pid) bad.push_back("soup not strictly ordered by pid");
        if (p.pid >= c.next_pid) bad.push_back(pid_text(p.pid) + " not below next pid");
        const auto& n = p.term->node;
        if (!std::holds_alternative<ProcTerm::Prefix>(n) && !std::holds_alternative<ProcTerm::Sum>(n) &&
            !std::holds_alternative<ProcTerm::Repl>(n)) {
            bad.push_back(pid_text(p.pid) + " is not a prefix, sum or replication");
        }
        const std::set<const EnvNode*>* globals = c.globals ? &c.globals->nodes : nullptr;
        for (const EnvNode* e = p.env.head(); e && !(globals && globals->count(e)); e = e->next.get()) {
            if (const ChanRef* ch = e->value.as_chan(); ch && !c.channels.count(ch->id)) {
                bad.push_back(pid_text(p.pid) + " refers to unscoped channel " + std::to_string(ch->id));
            }
            if (const ObjRef* o = e->value.as_obj(); o && !c.store.find(o->id)) {
                bad.push_back(pid_text(p.pid) + " refers to dangling obj#" + std::to_string(o->id));
            }
        }
    }
    for (const auto& [id, scope] : c.channels) {
        if (id >= c.next_channel) bad.push_back("channel id " + std::to_string(id) + " not below next id");
    }
    std::uint64_t reductions = c.trace_offset;
    for (const TraceEvent& e : c.trace) {
        if (e.kind == EventKind::comm || e.kind == EventKind::spawn) ++reductions;
    }
    if (reductions != c.step_count) bad.push_back("step count disagrees with the trace");
    for (std::size_t i = 1; i < c.trace.size(); ++i) {
        if (c.trace[i].step < c.trace[i - 1].step) bad.push_back("trace steps decrease");
    }
    return bad;
}

}  // namespace mlg
