#include "mlg/value.hpp"

namespace mlg {

const Natural* Value::as_nat() const {
    const auto* n = std::get_if<NatVal>(&v);
    return n ? &n->n : nullptr;
}

const ClosureData* Value::as_closure() const {
    const auto* c = std::get_if<Closure>(&v);
    return c ? c->data.get() : nullptr;
}

const ObjRef* Value::as_obj() const { return std::get_if<ObjRef>(&v); }
const ChanRef* Value::as_chan() const { return std::get_if<ChanRef>(&v); }

bool same_value(const Value& a, const Value& b) {
    if (a.v.index() != b.v.index()) return false;
    if (const auto* n = a.as_nat()) return *n == *b.as_nat();
    if (const auto* o = a.as_obj()) return *o == *b.as_obj();
    if (const auto* c = a.as_chan()) return *c == *b.as_chan();
    return a.as_closure() == b.as_closure();
}

ValueEnv ValueEnv::extend(std::string name, Value value) const {
    return ValueEnv(std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(value), head_}));
}

const Value* ValueEnv::lookup(std::string_view name) const {
    const EnvNode* n = find(name);
    return n ? &n->value : nullptr;
}

ValueEnv ValueEnv::rest() const { return head_ ? ValueEnv(head_->next) : ValueEnv(); }

const EnvNode* ValueEnv::find(std::string_view name) const {
    for (const EnvNode* n = head_.get(); n; n = n->next.get()) {
        if (n->name == name) return n;
    }
    return nullptr;
}

const Value* ValueEnv::lookup_until(std::string_view name, const ValueEnv& stop) const {
    for (const EnvNode* n = head_.get(); n && n != stop.head(); n = n->next.get()) {
        if (n->name == name) return &n->value;
    }
    return nullptr;
}

}  // namespace mlg
