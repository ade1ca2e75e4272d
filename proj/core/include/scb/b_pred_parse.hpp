#pragma once

#include "scb/b_ast.hpp"

#include <string_view>

namespace scb {

/// Parse an ASCII predicate as used by `--@invariant` pragma blocks:
/// identifiers, integers, TRUE/FALSE, arithmetic, comparisons (= /= < <= > >=),
/// membership (x : SET or x : a..b), & / or / not / =>, parentheses.
/// Throws TranslateError on malformed input.
BPredPtr parse_b_predicate(std::string_view text);

} // namespace scb
