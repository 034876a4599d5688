#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlg/natural.hpp"
#include "mlg/parser.hpp"
#include "mlg/syntax.hpp"
#include "mlg/typecheck.hpp"

namespace mlg {

/// The standard library source, as shipped.
std::string_view prelude_source();
/// The file-system demo program (uses the prelude).
std::string_view filesystem_demo_source();

struct PreludeDef {
    std::string name;
    std::string source;  // right-hand side, pretty-printed
    CompTypePtr expected;
};

struct Prelude {
    Program program;
    ParseScope scope;
    TypeEnv types;
    std::vector<PreludeDef> defs;
};

inline constexpr unsigned default_block_size = 4;

/// Parses and checks the prelude, replacing `blockSize` when `block_size`
/// is given. Every definition must check at its expected type; otherwise
/// this throws DiagnosticError.
Prelude load_prelude(std::optional<Natural> block_size = std::nullopt);

}  // namespace mlg
