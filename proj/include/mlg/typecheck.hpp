#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlg/source.hpp"
#include "mlg/syntax.hpp"

namespace mlg {

/// Static environment: computation variables and sorted channels. Binding a
/// name in one map removes it from the other (one shared namespace).
class TypeEnv {
   public:
    TypeEnv with_comp(const std::string& name, CompTypePtr type) const;
    TypeEnv with_chan(const std::string& name, ChannelSortPtr sort) const;

    const CompType* comp(const std::string& name) const;
    const ChannelSortPtr* chan(const std::string& name) const;
    CompTypePtr comp_ptr(const std::string& name) const;

    const std::map<std::string, CompTypePtr>& comp_bindings() const { return comp_; }
    const std::map<std::string, ChannelSortPtr>& chan_bindings() const { return chan_; }

   private:
    std::map<std::string, CompTypePtr> comp_;
    std::map<std::string, ChannelSortPtr> chan_;
};

template <class T>
struct Checked {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return value.has_value() && diagnostics.empty(); }
};

struct CheckOptions {
    bool allow_replication = true;
};

Checked<CompTypePtr> infer_comp(const TypeEnv& env, const CompExpr& e);
Checked<CompTypePtr> check_data(const TypeEnv& env, const DataExpr& d);
/// Empty result means the process is well-sorted.
std::vector<Diagnostic> check_proc(const TypeEnv& env, const ProcTerm& p, CheckOptions opts = {});

struct ProgramCheck {
    TypeEnv globals;  // types/sorts of every top-level def and channel
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

/// Checks every item in order, each under the bindings before it, then the
/// system entry. `base` seeds the environment (e.g. the checked prelude).
ProgramCheck check_program(const Program& program, const TypeEnv& base = {}, CheckOptions opts = {});

}  // namespace mlg
