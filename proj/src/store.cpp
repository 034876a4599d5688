#include "mlg/store.hpp"

#include <set>

#include "mlg/pretty.hpp"

namespace mlg {

namespace {

std::string ref_text(ObjRef ref) { return "obj#" + std::to_string(ref.id); }

}  // namespace

ObjRef ObjectStore::alloc(const Signature& signature, std::map<std::string, Value> initial) {
    if (signature.empty()) {
        throw StoreError(StoreErrorKind::empty_signature, "objects need at least one field");
    }
    if (initial.size() != signature.size()) {
        throw StoreError(StoreErrorKind::domain_mismatch, "initial fields do not match the object signature");
    }
    for (const auto& [label, type] : signature) {
        auto it = initial.find(label);
        if (it == initial.end()) {
            throw StoreError(StoreErrorKind::domain_mismatch, "missing initial value for field '" + label + "'");
        }
        if (!inhabits(it->second, *type, *this)) {
            throw StoreError(StoreErrorKind::type_mismatch,
                             "initial value of field '" + label + "' is not of type " + pretty(*type));
        }
    }
    ObjRef ref{next_id_++};
    objects_.emplace(ref.id, StoredObject{ref.id, signature, std::move(initial), 0});
    ++mutations_;
    return ref;
}

const StoredObject& ObjectStore::live(ObjRef ref) const {
    auto it = objects_.find(ref.id);
    if (it == objects_.end()) throw StoreError(StoreErrorKind::dangling_ref, "dangling reference " + ref_text(ref));
    return it->second;
}

const StoredObject* ObjectStore::find(ObjectId id) const {
    auto it = objects_.find(id);
    return it == objects_.end() ? nullptr : &it->second;
}

const Value& ObjectStore::get(ObjRef ref, const std::string& label) const {
    const StoredObject& obj = live(ref);
    auto it = obj.fields.find(label);
    if (it == obj.fields.end()) {
        throw StoreError(StoreErrorKind::unknown_label, ref_text(ref) + " has no field '" + label + "'");
    }
    return it->second;
}

void ObjectStore::update(ObjRef ref, const FieldWrites& writes) {
    const StoredObject& obj = live(ref);
    if (writes.empty()) throw StoreError(StoreErrorKind::empty_update, "object updates need at least one field");
    std::set<std::string> seen;
    for (const auto& [label, value] : writes) {
        if (!seen.insert(label).second) {
            throw StoreError(StoreErrorKind::duplicate_label, "duplicate field label '" + label + "' in update");
        }
        auto it = obj.signature.find(label);
        if (it == obj.signature.end()) {
            throw StoreError(StoreErrorKind::unknown_label, ref_text(ref) + " has no field '" + label + "'");
        }
        if (!inhabits(value, *it->second, *this)) {
            throw StoreError(StoreErrorKind::type_mismatch,
                             "new value of field '" + label + "' is not of type " + pretty(*it->second));
        }
    }
    StoredObject& target = objects_.at(ref.id);
    for (const auto& [label, value] : writes) target.fields.at(label) = value;
    ++target.version;
    ++mutations_;
}

bool inhabits(const Value& value, const CompType& type, const ObjectStore& store) {
    return std::visit(
        [&](const auto& t) -> bool {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, CompType::Nat>) {
                return value.as_nat() != nullptr;
            } else if constexpr (std::is_same_v<T, CompType::Arrow>) {
                const ClosureData* c = value.as_closure();
                return c && c->param_type == t.domain;
            } else {
                const ObjRef* r = value.as_obj();
                if (!r) return false;
                const StoredObject* obj = store.find(r->id);
                return obj && obj->signature == t.fields;
            }
        },
        type.node);
}

std::string to_string(const Value& value) {
    if (const Natural* n = value.as_nat()) return n->str();
    if (const ObjRef* o = value.as_obj()) return ref_text(*o);
    if (const ChanRef* c = value.as_chan()) return "chan#" + std::to_string(c->id);
    const ClosureData* c = value.as_closure();
    return "fun (" + c->param.text + " : " + pretty(*c->param_type) + ") " + pretty(*c->body);
}

std::string render_object(const StoredObject& obj) {
    std::string out = "obj#" + std::to_string(obj.id) + "{";
    bool first = true;
    for (const auto& [label, value] : obj.fields) {
        if (!first) out += ',';
        first = false;
        out += label;
        out += '=';
        out += to_string(value);
    }
    out += "}@v" + std::to_string(obj.version);
    return out;
}

}  // namespace mlg
