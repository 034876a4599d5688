#include "mlg/source.hpp"

#include <algorithm>

namespace mlg {

std::string_view to_string(DiagKind kind) {
    switch (kind) {
        case DiagKind::lexical: return "lexical-error";
        case DiagKind::syntax: return "syntax-error";
        case DiagKind::duplicate_definition: return "duplicate-definition";
        case DiagKind::unbound_name: return "unbound-name";
        case DiagKind::duplicate_label: return "duplicate-label";
        case DiagKind::empty_update: return "empty-update";
        case DiagKind::type_mismatch: return "type-mismatch";
        case DiagKind::not_a_function: return "not-a-function";
        case DiagKind::rec_branch_mismatch: return "rec-branch-mismatch";
        case DiagKind::missing_label: return "missing-label";
        case DiagKind::not_an_object: return "not-an-object";
        case DiagKind::unsorted_channel: return "unsorted-channel";
        case DiagKind::payload_sort_mismatch: return "payload-sort-mismatch";
        case DiagKind::match_category: return "match-category";
        case DiagKind::unguarded_sum: return "unguarded-sum";
        case DiagKind::replication_disabled: return "replication-disabled";
        case DiagKind::runtime: return "runtime-error";
        case DiagKind::fuel_exhausted: return "fuel-exhausted";
    }
    return "unknown";
}

std::string_view to_string(Severity severity) {
    switch (severity) {
        case Severity::error: return "error";
        case Severity::warning: return "warning";
        case Severity::note: return "note";
    }
    return "error";
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
    std::string out;
    out += file;
    out += ':';
    out += std::to_string(d.span.begin.line);
    out += ':';
    out += std::to_string(d.span.begin.col);
    out += ": ";
    out += to_string(d.severity);
    out += ": ";
    out += d.message;
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::error; });
}

}  // namespace mlg
