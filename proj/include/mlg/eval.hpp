#pragma once

#include <cstdint>
#include <stdexcept>

#include "mlg/store.hpp"
#include "mlg/syntax.hpp"
#include "mlg/value.hpp"

namespace mlg {

/// Step budget for one evaluation. Zero is rejected.
class Fuel {
   public:
    explicit Fuel(std::uint64_t limit) : limit_(limit) {
        if (limit == 0) throw std::invalid_argument("fuel limit must be positive");
    }
    std::uint64_t limit() const { return limit_; }

   private:
    std::uint64_t limit_;
};

inline constexpr std::uint64_t default_fuel = 10'000'000;

struct EvalResult {
    Value value;
    std::uint64_t steps = 0;  // beta reductions plus rec unfoldings
};

/// Call-by-value, left to right. Runtime faults (only reachable for
/// unchecked input) and fuel exhaustion throw DiagnosticError with kind
/// `runtime` or `fuel_exhausted`. Never mutates the store.
EvalResult eval_comp(const ValueEnv& env, const ObjectStore& store, const CompExpr& e,
                     Fuel fuel = Fuel(default_fuel));

/// Allocation or atomic update. `expected` is the signature the result must
/// have (the carrying channel's); a literal is allocated at that signature.
/// Without it, the signature is reconstructed from the initial values.
EvalResult eval_data(const ValueEnv& env, ObjectStore& store, const DataExpr& d,
                     const Signature* expected = nullptr, Fuel fuel = Fuel(default_fuel));

}  // namespace mlg
