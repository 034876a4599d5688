#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mlg/syntax.hpp"
#include "mlg/value.hpp"

namespace mlg {

enum class StoreErrorKind {
    dangling_ref,
    unknown_label,
    domain_mismatch,
    type_mismatch,
    duplicate_label,
    empty_update,
    empty_signature,
};

class StoreError : public std::runtime_error {
   public:
    StoreError(StoreErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    StoreErrorKind kind() const { return kind_; }

   private:
    StoreErrorKind kind_;
};

struct StoredObject {
    ObjectId id = 0;
    Signature signature;
    std::map<std::string, Value> fields;
    std::uint64_t version = 0;
};

using FieldWrites = std::vector<std::pair<std::string, Value>>;

/// Heap of stateful objects. Identifiers are allocated monotonically and
/// never reused; objects are never collected.
class ObjectStore {
   public:
    /// `initial` must cover exactly the signature's labels, each value
    /// inhabiting its field type.
    ObjRef alloc(const Signature& signature, std::map<std::string, Value> initial);

    const Value& get(ObjRef ref, const std::string& label) const;

    /// Validates every write first, then commits all of them and bumps the
    /// version once. On error nothing is written.
    void update(ObjRef ref, const FieldWrites& writes);

    const StoredObject* find(ObjectId id) const;
    const std::map<ObjectId, StoredObject>& objects() const { return objects_; }

    /// Rewrites every field value in place without counting a mutation;
    /// used when renumbering channels of a whole configuration.
    template <class F>
    void remap_values(F&& f) {
        for (auto& [id, obj] : objects_) {
            for (auto& [label, value] : obj.fields) value = f(value);
        }
    }

    /// Number of committed allocations and updates.
    std::uint64_t mutation_count() const { return mutations_; }

   private:
    const StoredObject& live(ObjRef ref) const;

    std::map<ObjectId, StoredObject> objects_;
    ObjectId next_id_ = 0;
    std::uint64_t mutations_ = 0;
};

/// Runtime type test. Closures are checked on their parameter type only.
bool inhabits(const Value& value, const CompType& type, const ObjectStore& store);

std::string to_string(const Value& value);
/// `obj#<id>{label=value,...}@v<version>`
std::string render_object(const StoredObject& obj);

}  // namespace mlg
