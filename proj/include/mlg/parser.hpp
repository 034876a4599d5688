#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlg/source.hpp"
#include "mlg/syntax.hpp"

namespace mlg {

struct NameInfo {
    NameKind kind = NameKind::variable;
    ChannelSortPtr sort;  // channels only
};

/// Names visible to a parse, keyed by text. Later bindings shadow earlier
/// ones regardless of kind (variables, labels and channels share one
/// namespace).
using ParseScope = std::map<std::string, NameInfo>;

/// Top-level names a program introduces, in scope for whatever is parsed
/// after it (used to put the prelude in scope).
ParseScope scope_of(const Program& program);

template <class T>
struct ParseResult {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return value.has_value() && !has_errors(diagnostics); }
};

/// Parses a whole `.mlg` program. Names bound in `outer` (typically the
/// prelude) are visible; redefining one of them is a duplicate definition.
ParseResult<Program> parse_program(std::string_view text, const ParseScope* outer = nullptr);

// Fragment parsers. With a null scope no unbound-name checking is done and
// bare payload names stay computation variables; with a scope, names are
// resolved exactly as inside a program.
ParseResult<CompExprPtr> parse_comp_expr(std::string_view text, const ParseScope* scope = nullptr);
ParseResult<DataExprPtr> parse_data_expr(std::string_view text, const ParseScope* scope = nullptr);
ParseResult<ProcTermPtr> parse_proc_term(std::string_view text, const ParseScope* scope = nullptr);
ParseResult<CompTypePtr> parse_comp_type(std::string_view text);
ParseResult<ChannelSortPtr> parse_channel_sort(std::string_view text);

}  // namespace mlg
