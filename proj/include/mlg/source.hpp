#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlg {

struct SourcePos {
    std::uint32_t line = 1;
    std::uint32_t col = 1;
    std::uint32_t offset = 0;
};

/// Half-open byte range [begin, end) in a source buffer.
struct Span {
    SourcePos begin;
    SourcePos end;
};

enum class Severity { error, warning, note };

enum class DiagKind {
    lexical,
    syntax,
    duplicate_definition,
    unbound_name,
    duplicate_label,
    empty_update,
    type_mismatch,
    not_a_function,
    rec_branch_mismatch,
    missing_label,
    not_an_object,
    unsorted_channel,
    payload_sort_mismatch,
    match_category,
    unguarded_sum,
    replication_disabled,
    runtime,
    fuel_exhausted,
};

struct Diagnostic {
    DiagKind kind = DiagKind::syntax;
    Severity severity = Severity::error;
    Span span;
    std::string message;
};

std::string_view to_string(DiagKind kind);
std::string_view to_string(Severity severity);

/// `FILE:LINE:COL: SEVERITY: MESSAGE`
std::string format_diagnostic(const Diagnostic& d, std::string_view file);

/// Exception carrying a single diagnostic; used on paths that cannot
/// continue (runtime faults, prelude build failures).
class DiagnosticError : public std::runtime_error {
   public:
    explicit DiagnosticError(Diagnostic d)
        : std::runtime_error(d.message), diag_(std::move(d)) {}
    const Diagnostic& diagnostic() const { return diag_; }

   private:
    Diagnostic diag_;
};

bool has_errors(const std::vector<Diagnostic>& diags);

}  // namespace mlg
