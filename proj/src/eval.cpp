#include "mlg/eval.hpp"

#include <map>

#include "mlg/pretty.hpp"

namespace mlg {

namespace {

[[noreturn]] void fault(const Span& span, std::string message, DiagKind kind = DiagKind::runtime) {
    throw DiagnosticError(Diagnostic{kind, Severity::error, span, std::move(message)});
}

class Evaluator {
   public:
    Evaluator(const ObjectStore& store, Fuel fuel) : store_(store), limit_(fuel.limit()) {}

    std::uint64_t steps() const { return steps_; }

    Value eval(const ValueEnv& env, const CompExpr& e) {
        return std::visit([&](const auto& n) { return eval_node(env, e, n); }, e.node);
    }

   private:
    void tick(const CompExpr& e) {
        if (++steps_ > limit_) {
            fault(e.span, "evaluation exceeded " + std::to_string(limit_) + " steps", DiagKind::fuel_exhausted);
        }
    }

    Natural nat_of(const Value& v, const CompExpr& e) {
        const Natural* n = v.as_nat();
        if (!n) fault(e.span, "expected a natural number from '" + pretty(e) + "'");
        return *n;
    }

    Value eval_node(const ValueEnv& env, const CompExpr& e, const CompExpr::Var& n) {
        const Value* v = env.lookup(n.name.text);
        if (!v) fault(e.span, "unbound variable '" + n.name.text + "'");
        return *v;
    }

    Value eval_node(const ValueEnv&, const CompExpr&, const CompExpr::Zero&) { return Value::nat(0); }

    Value eval_node(const ValueEnv&, const CompExpr&, const CompExpr::Num& n) { return Value::nat(n.value); }

    Value eval_node(const ValueEnv& env, const CompExpr&, const CompExpr::Succ& n) {
        return Value::nat(nat_of(eval(env, *n.arg), *n.arg) + 1);
    }

    Value eval_node(const ValueEnv& env, const CompExpr& e, const CompExpr::Rec& n) {
        Natural count = nat_of(eval(env, *n.scrutinee), *n.scrutinee);
        // rec on succ(v) needs rec on v first, so fold upward from z.
        tick(e);
        Value acc = eval(env, *n.zero_branch);
        for (Natural k = 0; k < count; ++k) {
            tick(e);
            ValueEnv inner = env.extend(n.succ_binder.text, Value::nat(k)).extend(n.rec_binder.text, std::move(acc));
            acc = eval(inner, *n.succ_branch);
        }
        return acc;
    }

    Value eval_node(const ValueEnv& env, const CompExpr&, const CompExpr::Lambda& n) {
        return Value{Closure{std::make_shared<const ClosureData>(ClosureData{n.param, n.param_type, n.body, env})}};
    }

    Value eval_node(const ValueEnv& env, const CompExpr& e, const CompExpr::App& n) {
        Value fn = eval(env, *n.fn);
        Value arg = eval(env, *n.arg);
        const ClosureData* c = fn.as_closure();
        if (!c) fault(n.fn->span, "'" + pretty(*n.fn) + "' is not a function");
        tick(e);
        // keep the closure alive across the call
        Value hold = fn;
        return eval(c->env.extend(c->param.text, std::move(arg)), *c->body);
    }

    Value eval_node(const ValueEnv& env, const CompExpr& e, const CompExpr::FieldSel& n) {
        Value subject = eval(env, *n.subject);
        const ObjRef* ref = subject.as_obj();
        if (!ref) fault(e.span, "cannot select field '" + n.label.text + "' from a non-object");
        try {
            return store_.get(*ref, n.label.text);
        } catch (const StoreError& err) {
            fault(e.span, err.what());
        }
    }

    const ObjectStore& store_;
    std::uint64_t limit_;
    std::uint64_t steps_ = 0;
};

CompTypePtr type_of_value(const Value& v, const ObjectStore& store) {
    if (v.as_nat()) return nat_type();
    if (const ObjRef* r = v.as_obj()) {
        if (const StoredObject* obj = store.find(r->id)) return obj_type(obj->signature);
    }
    return {};
}

}  // namespace

EvalResult eval_comp(const ValueEnv& env, const ObjectStore& store, const CompExpr& e, Fuel fuel) {
    Evaluator ev(store, fuel);
    Value v = ev.eval(env, e);
    return EvalResult{std::move(v), ev.steps()};
}

EvalResult eval_data(const ValueEnv& env, ObjectStore& store, const DataExpr& d, const Signature* expected,
                     Fuel fuel) {
    Evaluator ev(store, fuel);
    if (const auto* make = std::get_if<DataExpr::MakeObject>(&d.node)) {
        std::map<std::string, Value> initial;
        Signature derived;
        for (const FieldInit& f : make->fields) {
            Value v = ev.eval(env, *f.value);
            if (!expected) {
                CompTypePtr t = type_of_value(v, store);
                if (!t) fault(f.value->span, "cannot determine the type of field '" + f.label.text + "'");
                derived[f.label.text] = t;
            }
            if (!initial.emplace(f.label.text, std::move(v)).second) {
                fault(d.span, "duplicate field label '" + f.label.text + "'");
            }
        }
        try {
            ObjRef ref = store.alloc(expected ? *expected : derived, std::move(initial));
            return EvalResult{Value{ref}, ev.steps()};
        } catch (const StoreError& err) {
            fault(d.span, err.what());
        }
    }
    const auto& upd = std::get<DataExpr::UpdateObject>(d.node);
    Value target = ev.eval(env, *upd.target);
    const ObjRef* ref = target.as_obj();
    if (!ref) fault(upd.target->span, "update target '" + pretty(*upd.target) + "' is not an object");
    FieldWrites writes;
    for (const FieldInit& f : upd.updates) writes.emplace_back(f.label.text, ev.eval(env, *f.value));
    if (expected) {
        const StoredObject* obj = store.find(ref->id);
        if (obj && obj->signature != *expected) fault(d.span, "updated object does not have the expected signature");
    }
    try {
        store.update(*ref, writes);
    } catch (const StoreError& err) {
        fault(d.span, err.what());
    }
    return EvalResult{target, ev.steps()};
}

}  // namespace mlg
