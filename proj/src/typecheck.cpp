#include "mlg/typecheck.hpp"

#include <set>

#include "mlg/pretty.hpp"

namespace mlg {

TypeEnv TypeEnv::with_comp(const std::string& name, CompTypePtr type) const {
    TypeEnv out = *this;
    out.chan_.erase(name);
    out.comp_[name] = std::move(type);
    return out;
}

TypeEnv TypeEnv::with_chan(const std::string& name, ChannelSortPtr sort) const {
    TypeEnv out = *this;
    out.comp_.erase(name);
    out.chan_[name] = std::move(sort);
    return out;
}

const CompType* TypeEnv::comp(const std::string& name) const {
    auto it = comp_.find(name);
    return it == comp_.end() ? nullptr : it->second.get();
}

CompTypePtr TypeEnv::comp_ptr(const std::string& name) const {
    auto it = comp_.find(name);
    return it == comp_.end() ? CompTypePtr{} : it->second;
}

const ChannelSortPtr* TypeEnv::chan(const std::string& name) const {
    auto it = chan_.find(name);
    return it == chan_.end() ? nullptr : &it->second;
}

namespace {

struct TypeError {
    Diagnostic diag;
};

[[noreturn]] void fail(DiagKind kind, Span span, std::string message) {
    throw TypeError{Diagnostic{kind, Severity::error, span, std::move(message)}};
}

std::string show(const CompTypePtr& t) { return pretty(*t); }

bool is_nat(const CompType& t) { return std::holds_alternative<CompType::Nat>(t.node); }

CompTypePtr infer(const TypeEnv& env, const CompExpr& e) {
    return std::visit(
        [&](const auto& n) -> CompTypePtr {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, CompExpr::Var>) {
                CompTypePtr t = env.comp_ptr(n.name.text);
                if (!t) {
                    if (env.chan(n.name.text)) {
                        fail(DiagKind::unbound_name, e.span,
                             "'" + n.name.text + "' is a channel, not a computation variable");
                    }
                    fail(DiagKind::unbound_name, e.span, "unbound variable '" + n.name.text + "'");
                }
                return t;
            } else if constexpr (std::is_same_v<N, CompExpr::Zero> || std::is_same_v<N, CompExpr::Num>) {
                return nat_type();
            } else if constexpr (std::is_same_v<N, CompExpr::Succ>) {
                CompTypePtr t = infer(env, *n.arg);
                if (!is_nat(*t)) {
                    fail(DiagKind::type_mismatch, n.arg->span, "succ expects nat, found " + show(t));
                }
                return nat_type();
            } else if constexpr (std::is_same_v<N, CompExpr::Rec>) {
                CompTypePtr s = infer(env, *n.scrutinee);
                if (!is_nat(*s)) {
                    fail(DiagKind::type_mismatch, n.scrutinee->span,
                         "rec scrutinee must be nat, found " + show(s));
                }
                CompTypePtr result = infer(env, *n.zero_branch);
                TypeEnv inner =
                    env.with_comp(n.succ_binder.text, nat_type()).with_comp(n.rec_binder.text, result);
                CompTypePtr step = infer(inner, *n.succ_branch);
                if (!(step == result)) {
                    fail(DiagKind::rec_branch_mismatch, n.succ_branch->span,
                         "rec branches disagree: zero branch is " + show(result) + ", successor branch is " +
                             show(step));
                }
                return result;
            } else if constexpr (std::is_same_v<N, CompExpr::Lambda>) {
                CompTypePtr body = infer(env.with_comp(n.param.text, n.param_type), *n.body);
                return arrow_type(n.param_type, body);
            } else if constexpr (std::is_same_v<N, CompExpr::App>) {
                CompTypePtr f = infer(env, *n.fn);
                const auto* arrow = std::get_if<CompType::Arrow>(&f->node);
                if (!arrow) {
                    fail(DiagKind::not_a_function, n.fn->span, "cannot apply a value of type " + show(f));
                }
                CompTypePtr a = infer(env, *n.arg);
                if (!(a == arrow->domain)) {
                    fail(DiagKind::type_mismatch, n.arg->span,
                         "argument type mismatch: expected " + show(arrow->domain) + ", found " + show(a));
                }
                return arrow->codomain;
            } else {
                CompTypePtr s = infer(env, *n.subject);
                const auto* obj = std::get_if<CompType::Obj>(&s->node);
                if (!obj) {
                    fail(DiagKind::not_an_object, n.subject->span,
                         "cannot select field '" + n.label.text + "' from a value of type " + show(s));
                }
                auto it = obj->fields.find(n.label.text);
                if (it == obj->fields.end()) {
                    fail(DiagKind::missing_label, n.label.span.end.offset ? n.label.span : e.span,
                         "object of type " + show(s) + " has no field '" + n.label.text + "'");
                }
                return it->second;
            }
        },
        e.node);
}

void check_labels(const std::vector<FieldInit>& fields, Span span) {
    std::set<std::string> seen;
    for (const auto& f : fields) {
        if (!seen.insert(f.label.text).second) {
            fail(DiagKind::duplicate_label, f.label.span.end.offset ? f.label.span : span,
                 "duplicate field label '" + f.label.text + "'");
        }
    }
}

CompTypePtr data_type(const TypeEnv& env, const DataExpr& d) {
    return std::visit(
        [&](const auto& n) -> CompTypePtr {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, DataExpr::MakeObject>) {
                if (n.fields.empty()) fail(DiagKind::syntax, d.span, "object literals need at least one field");
                check_labels(n.fields, d.span);
                Signature sig;
                for (const auto& f : n.fields) sig[f.label.text] = infer(env, *f.value);
                return obj_type(std::move(sig));
            } else {
                if (n.updates.empty()) {
                    fail(DiagKind::empty_update, d.span, "object updates need at least one field");
                }
                check_labels(n.updates, d.span);
                CompTypePtr target = infer(env, *n.target);
                const auto* obj = std::get_if<CompType::Obj>(&target->node);
                if (!obj) fail(DiagKind::not_an_object, n.target->span, "cannot update a value of type " + show(target));
                for (const auto& f : n.updates) {
                    auto it = obj->fields.find(f.label.text);
                    if (it == obj->fields.end()) {
                        fail(DiagKind::missing_label, f.label.span.end.offset ? f.label.span : d.span,
                             "object of type " + show(target) + " has no field '" + f.label.text + "'");
                    }
                    CompTypePtr v = infer(env, *f.value);
                    if (!(v == it->second)) {
                        fail(DiagKind::type_mismatch, f.value->span,
                             "update of field '" + f.label.text + "' changes its type from " + show(it->second) +
                                 " to " + show(v));
                    }
                }
                return target;
            }
        },
        d.node);
}

enum class Category { channel, nat, object };

class ProcChecker {
   public:
    ProcChecker(std::vector<Diagnostic>& diags, CheckOptions opts) : diags_(diags), opts_(opts) {}

    void proc(const TypeEnv& env, const ProcTerm& p) {
        std::visit(
            [&](const auto& n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ProcTerm::Prefix>) {
                    std::optional<TypeEnv> next = action(env, *n.action);
                    if (next) proc(*next, *n.continuation);
                } else if constexpr (std::is_same_v<N, ProcTerm::Sum>) {
                    for (const ProcTermPtr* side : {&n.left, &n.right}) {
                        if (!is_guarded(**side)) {
                            report(DiagKind::unguarded_sum, (*side)->span,
                                   "sum operands must be 0, a prefixed process, or a sum of such");
                        }
                    }
                    proc(env, *n.left);
                    proc(env, *n.right);
                } else if constexpr (std::is_same_v<N, ProcTerm::Par>) {
                    proc(env, *n.left);
                    proc(env, *n.right);
                } else if constexpr (std::is_same_v<N, ProcTerm::Restrict>) {
                    proc(env.with_chan(n.chan.text, n.sort), *n.body);
                } else if constexpr (std::is_same_v<N, ProcTerm::Repl>) {
                    if (!opts_.allow_replication) {
                        report(DiagKind::replication_disabled, p.span, "replication is disabled (--no-repl)");
                    }
                    proc(env, *n.body);
                }
            },
            p.node);
    }

   private:
    const ChannelSortPtr* channel(const TypeEnv& env, const Name& c, Span at) {
        const ChannelSortPtr* s = env.chan(c.text);
        if (!s) report(DiagKind::unsorted_channel, at, "'" + c.text + "' is not a sorted channel");
        return s;
    }

    std::optional<TypeEnv> action(const TypeEnv& env, const ProcAction& a) {
        return std::visit(
            [&](const auto& n) -> std::optional<TypeEnv> {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ProcAction::Send>) {
                    const ChannelSortPtr* s = channel(env, n.chan, a.span);
                    if (s) conforms(env, n.payload, **s, n.chan.text);
                    return env;
                } else if constexpr (std::is_same_v<N, ProcAction::Receive>) {
                    const ChannelSortPtr* s = channel(env, n.chan, a.span);
                    if (!s) return std::nullopt;
                    if (const auto* cc = std::get_if<ChannelSort::CarriesChan>(&(*s)->node)) {
                        return env.with_chan(n.binder.text, cc->inner);
                    }
                    return env.with_comp(n.binder.text, carried_type(**s));
                } else {
                    std::optional<Category> l = category(env, n.left);
                    std::optional<Category> r = category(env, n.right);
                    if (l && r && *l != *r) {
                        report(DiagKind::match_category, a.span,
                               "match compares payloads of different categories");
                    }
                    return action(env, *n.inner);
                }
            },
            a.node);
    }

    std::optional<Category> category(const TypeEnv& env, const Payload& p) {
        if (const auto* c = std::get_if<Payload::ChanName>(&p.node)) {
            if (!env.chan(c->name.text)) {
                report(DiagKind::unsorted_channel, p.span, "'" + c->name.text + "' is not a sorted channel");
                return std::nullopt;
            }
            return Category::channel;
        }
        if (std::holds_alternative<Payload::Data>(p.node)) {
            report(DiagKind::match_category, p.span,
                   "object literals and updates cannot appear in a match guard");
            return std::nullopt;
        }
        const auto& e = *std::get<Payload::Comp>(p.node).expr;
        try {
            CompTypePtr t = infer(env, e);
            if (std::holds_alternative<CompType::Nat>(t->node)) return Category::nat;
            if (std::holds_alternative<CompType::Obj>(t->node)) return Category::object;
            report(DiagKind::match_category, p.span, "functions of type " + show(t) + " are not comparable");
        } catch (const TypeError& err) {
            diags_.push_back(err.diag);
        }
        return std::nullopt;
    }

    void conforms(const TypeEnv& env, const Payload& p, const ChannelSort& sort, const std::string& chan) {
        auto mismatch = [&](const std::string& what) {
            report(DiagKind::payload_sort_mismatch, p.span,
                   "channel '" + chan + "' carries " + pretty(sort) + ", but the payload is " + what);
        };
        if (const auto* cc = std::get_if<ChannelSort::CarriesChan>(&sort.node)) {
            const auto* name = std::get_if<Payload::ChanName>(&p.node);
            if (!name) {
                mismatch("not a channel name");
                return;
            }
            const ChannelSortPtr* s = env.chan(name->name.text);
            if (!s) {
                report(DiagKind::unsorted_channel, p.span, "'" + name->name.text + "' is not a sorted channel");
            } else if (!(*s == cc->inner)) {
                mismatch("a channel of sort " + pretty(**s));
            }
            return;
        }
        CompTypePtr expected = carried_type(sort);
        try {
            if (const auto* c = std::get_if<Payload::Comp>(&p.node)) {
                CompTypePtr t = infer(env, *c->expr);
                if (!(t == expected)) mismatch("of type " + show(t));
            } else if (const auto* d = std::get_if<Payload::Data>(&p.node)) {
                CompTypePtr t = data_type(env, *d->expr);
                if (!(t == expected)) mismatch("an object of type " + show(t));
            } else {
                mismatch("a channel name");
            }
        } catch (const TypeError& err) {
            diags_.push_back(err.diag);
        }
    }

    void report(DiagKind kind, Span span, std::string message) {
        diags_.push_back(Diagnostic{kind, Severity::error, span, std::move(message)});
    }

    std::vector<Diagnostic>& diags_;
    CheckOptions opts_;
};

}  // namespace

Checked<CompTypePtr> infer_comp(const TypeEnv& env, const CompExpr& e) {
    Checked<CompTypePtr> out;
    try {
        out.value = infer(env, e);
    } catch (const TypeError& err) {
        out.diagnostics.push_back(err.diag);
    }
    return out;
}

Checked<CompTypePtr> check_data(const TypeEnv& env, const DataExpr& d) {
    Checked<CompTypePtr> out;
    try {
        out.value = data_type(env, d);
    } catch (const TypeError& err) {
        out.diagnostics.push_back(err.diag);
    }
    return out;
}

std::vector<Diagnostic> check_proc(const TypeEnv& env, const ProcTerm& p, CheckOptions opts) {
    std::vector<Diagnostic> diags;
    ProcChecker(diags, opts).proc(env, p);
    return diags;
}

ProgramCheck check_program(const Program& program, const TypeEnv& base, CheckOptions opts) {
    ProgramCheck out{base, {}};
    for (const Item& it : program.items) {
        std::visit(
            [&](const auto& i) {
                using I = std::decay_t<decltype(i)>;
                if constexpr (std::is_same_v<I, CompDef>) {
                    Checked<CompTypePtr> t = infer_comp(out.globals, *i.expr);
                    if (t.value) {
                        out.globals = out.globals.with_comp(i.name.text, *t.value);
                    }
                    out.diagnostics.insert(out.diagnostics.end(), t.diagnostics.begin(), t.diagnostics.end());
                } else if constexpr (std::is_same_v<I, ChanDecl>) {
                    out.globals = out.globals.with_chan(i.name.text, i.sort);
                } else {
                    auto d = check_proc(out.globals, *i.body, opts);
                    out.diagnostics.insert(out.diagnostics.end(), d.begin(), d.end());
                }
            },
            it);
    }
    if (program.system) {
        auto d = check_proc(out.globals, *program.system, opts);
        out.diagnostics.insert(out.diagnostics.end(), d.begin(), d.end());
    }
    return out;
}

}  // namespace mlg
