#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

#include "mlg/natural.hpp"
#include "mlg/syntax.hpp"

namespace mlg {

using ObjectId = std::uint64_t;
using ChannelId = std::uint64_t;

struct ClosureData;

struct NatVal {
    Natural n;
};

struct Closure {
    std::shared_ptr<const ClosureData> data;
};

struct ObjRef {
    ObjectId id = 0;
    friend bool operator==(ObjRef, ObjRef) = default;
};

struct ChanRef {
    ChannelId id = 0;
    friend bool operator==(ChanRef, ChanRef) = default;
};

struct Value {
    std::variant<NatVal, Closure, ObjRef, ChanRef> v;

    static Value nat(Natural n) { return Value{NatVal{std::move(n)}}; }
    static Value obj(ObjectId id) { return Value{ObjRef{id}}; }
    static Value chan(ChannelId id) { return Value{ChanRef{id}}; }

    const Natural* as_nat() const;
    const ClosureData* as_closure() const;
    const ObjRef* as_obj() const;
    const ChanRef* as_chan() const;
};

/// Identity-aware equality: naturals by value, references by identifier,
/// closures by shared identity only.
bool same_value(const Value& a, const Value& b);

struct EnvNode;

/// Persistent singly linked environment; extend() never mutates `*this`.
class ValueEnv {
   public:
    ValueEnv() = default;

    ValueEnv extend(std::string name, Value value) const;
    const Value* lookup(std::string_view name) const;
    const EnvNode* find(std::string_view name) const;
    /// Like lookup(), but stops (returns null) on reaching `stop`.
    const Value* lookup_until(std::string_view name, const ValueEnv& stop) const;

    const EnvNode* head() const { return head_.get(); }
    /// The environment below the most recent binding.
    ValueEnv rest() const;

   private:
    explicit ValueEnv(std::shared_ptr<const EnvNode> head) : head_(std::move(head)) {}
    std::shared_ptr<const EnvNode> head_;
};

struct EnvNode {
    std::string name;
    Value value;
    std::shared_ptr<const EnvNode> next;
};

struct ClosureData {
    Name param;
    CompTypePtr param_type;
    CompExprPtr body;
    ValueEnv env;
};

}  // namespace mlg
