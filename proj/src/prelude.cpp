#include "mlg/prelude.hpp"

#include <map>

#include "mlg/pretty.hpp"

namespace mlg {

namespace {

const std::map<std::string, std::string>& expected_types() {
    static const std::map<std::string, std::string> types = {
        {"pred", "nat -> nat"},
        {"add", "nat -> nat -> nat"},
        {"mul", "nat -> nat -> nat"},
        {"monus", "nat -> nat -> nat"},
        {"isZero", "nat -> nat"},
        {"leq", "nat -> nat -> nat"},
        {"lt", "nat -> nat -> nat"},
        {"div_floor", "nat -> nat -> nat"},
        {"div_ceil", "nat -> nat -> nat"},
        {"div", "nat -> nat -> nat"},
        {"half", "nat -> nat"},
        {"odd", "nat -> nat"},
        {"blockSize", "nat"},
        {"blockCount", "nat -> nat"},
        {"indexToBlock", "nat -> nat"},
        {"blockOffset", "nat -> nat"},
        {"shiftRight", "nat -> nat -> nat"},
        {"hasPermission", "nat -> nat -> nat"},
    };
    return types;
}

[[noreturn]] void broken(std::string message, Span span = {}) {
    throw DiagnosticError(Diagnostic{DiagKind::type_mismatch, Severity::error, span, "prelude: " + std::move(message)});
}

}  // namespace

Prelude load_prelude(std::optional<Natural> block_size) {
    auto parsed = parse_program(prelude_source());
    if (!parsed.ok()) {
        if (!parsed.diagnostics.empty()) throw DiagnosticError(parsed.diagnostics.front());
        broken("failed to parse");
    }
    Prelude out;
    out.program = std::move(*parsed.value);
    if (block_size) {
        for (Item& item : out.program.items) {
            if (auto* def = std::get_if<CompDef>(&item); def && def->name.text == "blockSize") {
                def->expr = ast::num(*block_size);
            }
        }
    }
    ProgramCheck check = check_program(out.program);
    if (!check.ok()) throw DiagnosticError(check.diagnostics.front());
    out.types = check.globals;
    out.scope = scope_of(out.program);

    const auto& table = expected_types();
    for (const Item& item : out.program.items) {
        const auto* def = std::get_if<CompDef>(&item);
        if (!def) continue;
        auto it = table.find(def->name.text);
        if (it == table.end()) broken("no expected type for '" + def->name.text + "'", def->name.span);
        auto type = parse_comp_type(it->second);
        CompTypePtr actual = out.types.comp_ptr(def->name.text);
        if (!type.ok() || !(actual == *type.value)) {
            broken("'" + def->name.text + "' does not have type " + it->second, def->name.span);
        }
        out.defs.push_back(PreludeDef{def->name.text, pretty(*def->expr), actual});
    }
    return out;
}

}  // namespace mlg
