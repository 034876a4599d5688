#include "mlg/canonical.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "mlg/pretty.hpp"

namespace mlg {

namespace {

// Restricted channels are written as kOpen <id> kClose while rendering and
// numbered once the member order is fixed.
constexpr char kOpen = '\x01';
constexpr char kClose = '\x02';

std::string anonymous(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool skipping = false;
    for (char ch : s) {
        if (ch == kOpen) {
            out += ch;
            skipping = true;
        } else if (ch == kClose) {
            out += ch;
            skipping = false;
        } else if (!skipping) {
            out += ch;
        }
    }
    return out;
}

bool has_fresh(const std::string& s) { return s.find(kOpen) != std::string::npos; }

struct Keyed {
    std::string anon;
    std::string raw;
    bool operator<(const Keyed& o) const { return anon != o.anon ? anon < o.anon : raw < o.raw; }
};

class Renderer {
   public:
    explicit Renderer(const Configuration& c) : c_(c) {}

    std::string member(const Process& p) {
        std::string out;
        if (p.copy_of) {
            const Process* origin = find_process(c_, *p.copy_of);
            out += "copy{" + (origin ? member(*origin) : std::string("?")) + "}";
        }
        out += term(*p.term, p.env);
        if (std::holds_alternative<ProcTerm::Repl>(p.term->node)) {
            auto it = c_.spawns.find(p.pid);
            out += "#" + std::to_string(it == c_.spawns.end() ? 0u : it->second);
        }
        return out;
    }

    std::string term(const ProcTerm& t, const ValueEnv& env) {
        std::vector<std::string> saved;
        saved.swap(stack_);
        std::string out;
        proc(t, env, out);
        stack_.swap(saved);
        return out;
    }

    std::string value(const Value& v) {
        if (const Natural* n = v.as_nat()) return n->str();
        if (const ObjRef* o = v.as_obj()) return "o#" + std::to_string(o->id);
        if (const ChanRef* ch = v.as_chan()) return channel(ch->id);
        const ClosureData* clo = v.as_closure();
        if (c_.globals) {
            auto it = c_.globals->closure_names.find(clo);
            if (it != c_.globals->closure_names.end()) return "@" + it->second;
        }
        std::vector<std::string> saved;
        saved.swap(stack_);
        std::string out = "C(%0:" + pretty(*clo->param_type) + ";";
        stack_.push_back(clo->param.text);
        comp(*clo->body, clo->env, out);
        out += ")";
        stack_.swap(saved);
        return out;
    }

    std::string channel(ChannelId id) {
        auto it = c_.channels.find(id);
        if (it == c_.channels.end()) return "chan#" + std::to_string(id);
        if (it->second.global) return "@" + it->second.name;
        return kOpen + std::to_string(id) + kClose;
    }

   private:
    bool bound(const std::string& name, std::string& out) {
        for (std::size_t i = stack_.size(); i-- > 0;) {
            if (stack_[i] == name) {
                out += "%" + std::to_string(i);
                return true;
            }
        }
        return false;
    }

    void free_name(const std::string& name, const ValueEnv& env, std::string& out) {
        const EnvNode* node = env.find(name);
        if (!node) {
            out += "?" + name;
        } else if (c_.globals && c_.globals->nodes.count(node)) {
            out += "@" + name;
        } else {
            out += value(node->value);
        }
    }

    void name(const std::string& n, const ValueEnv& env, std::string& out) {
        if (!bound(n, out)) free_name(n, env, out);
    }

    void comp(const CompExpr& e, const ValueEnv& env, std::string& out) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, CompExpr::Var>) {
                    name(n.name.text, env, out);
                } else if constexpr (std::is_same_v<T, CompExpr::Zero>) {
                    out += "0";
                } else if constexpr (std::is_same_v<T, CompExpr::Num>) {
                    out += n.value.str();
                } else if constexpr (std::is_same_v<T, CompExpr::Succ>) {
                    out += "S(";
                    comp(*n.arg, env, out);
                    out += ")";
                } else if constexpr (std::is_same_v<T, CompExpr::Rec>) {
                    out += "R(";
                    comp(*n.scrutinee, env, out);
                    out += ";";
                    comp(*n.zero_branch, env, out);
                    out += ";";
                    stack_.push_back(n.succ_binder.text);
                    stack_.push_back(n.rec_binder.text);
                    comp(*n.succ_branch, env, out);
                    stack_.pop_back();
                    stack_.pop_back();
                    out += ")";
                } else if constexpr (std::is_same_v<T, CompExpr::Lambda>) {
                    out += "L(" + pretty(*n.param_type) + ";";
                    stack_.push_back(n.param.text);
                    comp(*n.body, env, out);
                    stack_.pop_back();
                    out += ")";
                } else if constexpr (std::is_same_v<T, CompExpr::App>) {
                    out += "A(";
                    comp(*n.fn, env, out);
                    out += ";";
                    comp(*n.arg, env, out);
                    out += ")";
                } else {
                    out += "F(";
                    comp(*n.subject, env, out);
                    out += ";" + n.label.text + ")";
                }
            },
            e.node);
    }

    void fields(const std::vector<FieldInit>& fs, const ValueEnv& env, std::string& out) {
        out += "{";
        for (const FieldInit& f : fs) {
            out += f.label.text + "=";
            comp(*f.value, env, out);
            out += ",";
        }
        out += "}";
    }

    void payload(const Payload& p, const ValueEnv& env, std::string& out) {
        if (const auto* c = std::get_if<Payload::ChanName>(&p.node)) {
            name(c->name.text, env, out);
        } else if (const auto* e = std::get_if<Payload::Comp>(&p.node)) {
            comp(*e->expr, env, out);
        } else {
            const DataExpr& d = *std::get<Payload::Data>(p.node).expr;
            if (const auto* m = std::get_if<DataExpr::MakeObject>(&d.node)) {
                out += "M";
                fields(m->fields, env, out);
            } else {
                const auto& u = std::get<DataExpr::UpdateObject>(d.node);
                out += "U(";
                comp(*u.target, env, out);
                out += ")";
                fields(u.updates, env, out);
            }
        }
    }

    // Returns the number of binders pushed for the continuation.
    int action(const ProcAction& a, const ValueEnv& env, std::string& out) {
        if (const auto* s = std::get_if<ProcAction::Send>(&a.node)) {
            name(s->chan.text, env, out);
            out += "!(";
            payload(s->payload, env, out);
            out += ")";
            return 0;
        }
        if (const auto* r = std::get_if<ProcAction::Receive>(&a.node)) {
            name(r->chan.text, env, out);
            out += "?(%" + std::to_string(stack_.size()) + ")";
            stack_.push_back(r->binder.text);
            return 1;
        }
        const auto& m = std::get<ProcAction::Match>(a.node);
        out += "[";
        payload(m.left, env, out);
        out += "=";
        payload(m.right, env, out);
        out += "]";
        return action(*m.inner, env, out);
    }

    template <class Node>
    void flatten(const ProcTerm& t, std::vector<const ProcTerm*>& out) {
        if (const auto* n = std::get_if<Node>(&t.node)) {
            flatten<Node>(*n->left, out);
            flatten<Node>(*n->right, out);
        } else {
            out.push_back(&t);
        }
    }

    template <class Node>
    void sorted_operands(const ProcTerm& t, const ValueEnv& env, char sep, std::string& out) {
        std::vector<const ProcTerm*> ops;
        flatten<Node>(t, ops);
        std::vector<Keyed> parts;
        for (const ProcTerm* op : ops) {
            if (std::holds_alternative<ProcTerm::Nil>(op->node)) continue;
            std::string s;
            proc(*op, env, s);
            parts.push_back(Keyed{anonymous(s), std::move(s)});
        }
        if (parts.empty()) {
            out += "0";
            return;
        }
        if (parts.size() == 1) {
            out += parts[0].raw;
            return;
        }
        std::sort(parts.begin(), parts.end());
        out += "(";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += sep;
            out += parts[i].raw;
        }
        out += ")";
    }

    void proc(const ProcTerm& t, const ValueEnv& env, std::string& out) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ProcTerm::Nil>) {
                    out += "0";
                } else if constexpr (std::is_same_v<T, ProcTerm::Prefix>) {
                    int pushed = action(*n.action, env, out);
                    out += ".";
                    proc(*n.continuation, env, out);
                    stack_.resize(stack_.size() - static_cast<std::size_t>(pushed));
                } else if constexpr (std::is_same_v<T, ProcTerm::Sum>) {
                    sorted_operands<ProcTerm::Sum>(t, env, '+', out);
                } else if constexpr (std::is_same_v<T, ProcTerm::Par>) {
                    sorted_operands<ProcTerm::Par>(t, env, '|', out);
                } else if constexpr (std::is_same_v<T, ProcTerm::Restrict>) {
                    out += "N(" + pretty(*n.sort) + ").";
                    stack_.push_back(n.chan.text);
                    proc(*n.body, env, out);
                    stack_.pop_back();
                } else if constexpr (std::is_same_v<T, ProcTerm::Repl>) {
                    out += "!(";
                    proc(*n.body, env, out);
                    out += ")";
                } else {
                    out += "@@" + n.name.text;
                }
            },
            t.node);
    }

    const Configuration& c_;
    std::vector<std::string> stack_;
};

// Replaces channel markers by first-occurrence indices, extending `index`.
void number_into(const std::string& s, std::map<ChannelId, std::size_t>& index, std::string& out) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != kOpen) {
            out += s[i];
            continue;
        }
        std::size_t end = s.find(kClose, i);
        ChannelId id = std::stoull(s.substr(i + 1, end - i - 1));
        auto [it, fresh] = index.emplace(id, index.size());
        out += "$" + std::to_string(it->second);
        i = end;
    }
}

struct Analysis {
    std::vector<std::size_t> order;  // soup indices in canonical order
    std::map<ChannelId, std::size_t> index;
    std::vector<std::string> members;  // final renderings, canonical order
    std::string store;
    std::string text;
};

Analysis analyse(const Configuration& c) {
    Renderer r(c);
    std::vector<Keyed> keyed;
    for (const Process& p : c.soup) {
        std::string raw = r.member(p);
        keyed.push_back(Keyed{anonymous(raw), std::move(raw)});
    }
    std::string store_raw;
    for (const auto& [id, obj] : c.store.objects()) {
        store_raw += "obj#" + std::to_string(id) + "{";
        for (const auto& [label, v] : obj.fields) store_raw += label + "=" + r.value(v) + ",";
        store_raw += "}@v" + std::to_string(obj.version) + ";";
    }

    std::vector<std::size_t> base(keyed.size());
    std::iota(base.begin(), base.end(), 0);
    std::sort(base.begin(), base.end(), [&](std::size_t a, std::size_t b) {
        if (keyed[a] < keyed[b]) return true;
        if (keyed[b] < keyed[a]) return false;
        return a < b;
    });

    // groups of equal anonymous renderings that mention restricted channels
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    std::size_t arrangements = 1;
    for (std::size_t i = 0; i < base.size();) {
        std::size_t j = i + 1;
        while (j < base.size() && keyed[base[j]].anon == keyed[base[i]].anon) ++j;
        if (j - i > 1 && has_fresh(keyed[base[i]].anon)) {
            groups.emplace_back(i, j);
            for (std::size_t k = 2; k <= j - i && arrangements <= max_tie_arrangements; ++k) arrangements *= k;
        }
        i = j;
    }
    if (arrangements > max_tie_arrangements) groups.clear();

    Analysis best;
    bool have = false;
    auto consider = [&](const std::vector<std::size_t>& order) {
        Analysis a;
        a.order = order;
        for (std::size_t i : order) {
            std::string m;
            number_into(keyed[i].raw, a.index, m);
            a.text += m + " | ";
            a.members.push_back(std::move(m));
        }
        number_into(store_raw, a.index, a.store);
        if (!have || a.text + a.store < best.text + best.store) {
            best = std::move(a);
            have = true;
        }
    };

    std::vector<std::size_t> order = base;
    std::function<void(std::size_t)> search = [&](std::size_t g) {
        if (g == groups.size()) {
            consider(order);
            return;
        }
        auto first = order.begin() + static_cast<std::ptrdiff_t>(groups[g].first);
        auto last = order.begin() + static_cast<std::ptrdiff_t>(groups[g].second);
        std::sort(first, last);
        do {
            search(g + 1);
        } while (std::next_permutation(first, last));
    };
    search(0);

    std::string sorts;
    std::vector<std::pair<std::size_t, ChannelId>> by_index;
    for (const auto& [id, i] : best.index) by_index.emplace_back(i, id);
    std::sort(by_index.begin(), by_index.end());
    for (const auto& [i, id] : by_index) sorts += "$" + std::to_string(i) + ":" + pretty(*c.channels.at(id).sort) + ";";
    best.text += "|| " + best.store + " || " + sorts;
    return best;
}

std::string numbered(const std::string& raw, const std::map<ChannelId, std::size_t>& index) {
    std::map<ChannelId, std::size_t> copy = index;
    std::string out;
    number_into(raw, copy, out);
    return out;
}

Value remap_value(const Value& v, const std::map<ChannelId, ChannelId>& ids, const std::set<const EnvNode*>& globals,
                  std::map<const ClosureData*, Value>& memo);

ValueEnv remap_env(const ValueEnv& env, const std::map<ChannelId, ChannelId>& ids,
                   const std::set<const EnvNode*>& globals, std::map<const ClosureData*, Value>& memo) {
    std::vector<const EnvNode*> locals;
    ValueEnv base = env;
    while (base.head() && !globals.count(base.head())) {
        locals.push_back(base.head());
        base = base.rest();
    }
    for (auto it = locals.rbegin(); it != locals.rend(); ++it) {
        base = base.extend((*it)->name, remap_value((*it)->value, ids, globals, memo));
    }
    return base;
}

Value remap_value(const Value& v, const std::map<ChannelId, ChannelId>& ids, const std::set<const EnvNode*>& globals,
                  std::map<const ClosureData*, Value>& memo) {
    if (const ChanRef* ch = v.as_chan()) {
        auto it = ids.find(ch->id);
        return it == ids.end() ? v : Value::chan(it->second);
    }
    const ClosureData* clo = v.as_closure();
    if (!clo) return v;
    auto hit = memo.find(clo);
    if (hit != memo.end()) return hit->second;
    if (!clo->env.head() || globals.count(clo->env.head())) return memo[clo] = v;
    auto data = std::make_shared<const ClosureData>(
        ClosureData{clo->param, clo->param_type, clo->body, remap_env(clo->env, ids, globals, memo)});
    return memo[clo] = Value{Closure{std::move(data)}};
}

}  // namespace

CanonicalState canonicalize(const Configuration& config) { return CanonicalState{analyse(config).text}; }

std::vector<std::string> canonical_redex_labels(const Configuration& config) {
    Analysis a = analyse(config);
    std::map<Pid, std::size_t> position;
    for (std::size_t k = 0; k < a.order.size(); ++k) position[config.soup[a.order[k]].pid] = k;
    Renderer r(config);
    auto endpoint = [&](const Endpoint& e) {
        const Process* p = find_process(config, e.pid);
        const ProcTerm* branch = branch_at(*p->term, e.path);
        return a.members[position.at(e.pid)] + " :: " + numbered(r.term(*branch, p->env), a.index);
    };
    std::vector<std::string> labels;
    for (const Redex& redex : enabled_redexes(config)) {
        if (redex.kind == Redex::Kind::spawn) {
            labels.push_back("spawn " + a.members[position.at(redex.repl)]);
        } else {
            labels.push_back("comm " + numbered(r.channel(redex.chan), a.index) + " " + endpoint(redex.sender) +
                             " -> " + endpoint(redex.receiver));
        }
    }
    std::sort(labels.begin(), labels.end());
    return labels;
}

Configuration canonical_representative(const Configuration& config) {
    Analysis a = analyse(config);

    ChannelId first_fresh = 0;
    for (const auto& [id, scope] : config.channels) {
        if (scope.global) first_fresh = std::max(first_fresh, id + 1);
    }
    std::map<ChannelId, ChannelId> ids;
    ChannelId next = first_fresh + a.index.size();
    for (const auto& [id, scope] : config.channels) {
        if (scope.global) continue;
        auto it = a.index.find(id);
        ids[id] = it != a.index.end() ? first_fresh + it->second : next++;
    }

    static const std::set<const EnvNode*> no_globals;
    const auto& globals = config.globals ? config.globals->nodes : no_globals;
    std::map<const ClosureData*, Value> memo;

    Configuration out;
    out.globals = config.globals;
    for (const auto& [id, scope] : config.channels) out.channels[scope.global ? id : ids.at(id)] = scope;
    out.next_channel = next;

    std::map<Pid, Pid> pids;
    for (std::size_t k = 0; k < a.order.size(); ++k) pids[config.soup[a.order[k]].pid] = k;
    for (std::size_t k = 0; k < a.order.size(); ++k) {
        const Process& p = config.soup[a.order[k]];
        std::optional<Pid> copy_of;
        if (p.copy_of) copy_of = pids.count(*p.copy_of) ? pids.at(*p.copy_of) : *p.copy_of + a.order.size();
        out.soup.push_back(Process{k, p.term, remap_env(p.env, ids, globals, memo), copy_of});
    }
    out.next_pid = a.order.size();
    for (const auto& [pid, n] : config.spawns) {
        if (pids.count(pid)) out.spawns[pids.at(pid)] = n;
    }
    out.store = config.store;
    out.store.remap_values([&](const Value& v) { return remap_value(v, ids, globals, memo); });
    out.step_count = config.step_count;
    out.trace_offset = config.step_count;
    out.rng_state = config.rng_state;
    return out;
}

}  // namespace mlg
