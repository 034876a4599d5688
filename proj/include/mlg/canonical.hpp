#pragma once

// Canonical forms of configurations up to structural congruence: parallel
// composition is flattened and sorted, 0 is dropped, sums are sorted, bound
// names become positional indices and restricted channels are numbered by
// first occurrence.

#include <compare>
#include <string>
#include <vector>

#include "mlg/engine.hpp"

namespace mlg {

struct CanonicalState {
    std::string text;

    friend bool operator==(const CanonicalState&, const CanonicalState&) = default;
    friend auto operator<=>(const CanonicalState&, const CanonicalState&) = default;
};

/// Ties between members that differ only in which restricted channels they
/// use are broken by trying every arrangement, up to this many.
inline constexpr std::size_t max_tie_arrangements = 5040;

CanonicalState canonicalize(const Configuration& config);

/// Pid-free descriptions of the enabled redexes, sorted.
std::vector<std::string> canonical_redex_labels(const Configuration& config);

/// An equivalent configuration whose soup, pids and restricted channel ids
/// follow the canonical order. Its trace is empty.
Configuration canonical_representative(const Configuration& config);

}  // namespace mlg
