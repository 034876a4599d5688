#include "mlg/driver.hpp"

#include "mlg/parser.hpp"
#include "mlg/prelude.hpp"
#include "mlg/typecheck.hpp"

namespace mlg {

namespace {

void reject_replication(const ProcTerm* p, const Span& span, std::vector<Diagnostic>& out) {
    if (p && uses_replication(*p)) {
        out.push_back(Diagnostic{DiagKind::replication_disabled, Severity::error, span,
                                 "replication is disabled (--no-repl)"});
    }
}

}  // namespace

Frontend load_program(std::string_view text, const FrontendOptions& opts) {
    Frontend out;
    std::optional<Prelude> prelude;
    if (opts.use_prelude) prelude = load_prelude(opts.block_size);

    auto parsed = parse_program(text, prelude ? &prelude->scope : nullptr);
    out.diagnostics = parsed.diagnostics;
    if (!parsed.ok()) return out;
    out.user = std::move(*parsed.value);

    if (opts.check) {
        CheckOptions copts;
        copts.allow_replication = opts.allow_replication;
        ProgramCheck check = check_program(out.user, prelude ? prelude->types : TypeEnv{}, copts);
        if (!check.ok()) {
            out.diagnostics.insert(out.diagnostics.end(), check.diagnostics.begin(), check.diagnostics.end());
            return out;
        }
    } else if (!opts.allow_replication) {
        std::vector<Diagnostic> diags;
        for (const Item& item : out.user.items) {
            if (const auto* proc = std::get_if<ProcDef>(&item)) reject_replication(proc->body.get(), proc->name.span, diags);
        }
        if (out.user.system) reject_replication(out.user.system.get(), out.user.system->span, diags);
        if (!diags.empty()) {
            out.diagnostics.insert(out.diagnostics.end(), diags.begin(), diags.end());
            return out;
        }
    }
    out.linked = prelude ? link(prelude->program, out.user) : out.user;
    return out;
}

}  // namespace mlg
