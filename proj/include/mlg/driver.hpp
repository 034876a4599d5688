#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mlg/natural.hpp"
#include "mlg/source.hpp"
#include "mlg/syntax.hpp"

namespace mlg {

struct FrontendOptions {
    bool use_prelude = true;
    bool check = true;
    bool allow_replication = true;
    std::optional<Natural> block_size;
};

struct Frontend {
    Program user;                   // the parsed input alone
    std::optional<Program> linked;  // prelude + input, when everything passed
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return linked.has_value(); }
};

/// Parse (with the prelude in scope), check, and link a source text.
Frontend load_program(std::string_view text, const FrontendOptions& opts = {});

}  // namespace mlg
