#pragma once

#include <string>

#include "mlg/syntax.hpp"

namespace mlg {

// Concrete-syntax printers. Output re-parses to a structurally identical
// tree; parentheses are emitted only where precedence requires them.

std::string pretty(const CompType& t);
std::string pretty(const ChannelSort& s);
std::string pretty(const CompExpr& e);
std::string pretty(const DataExpr& d);
std::string pretty(const Payload& p);
std::string pretty(const ProcAction& a);
std::string pretty(const ProcTerm& p);
std::string pretty(const Item& item);
/// One item per line, `system` last.
std::string pretty(const Program& program);

}  // namespace mlg
