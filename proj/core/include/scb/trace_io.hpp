#pragma once

#include "scb/scade_ast.hpp"
#include "scb/value.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scb {

using CycleInputs = std::map<std::string, Value>;

/// Per-cycle input sequence plus where it came from (file path or seed).
struct Trace {
    std::vector<CycleInputs> cycles;
    std::string provenance;
};

/// Trace file format: one cycle per line, space-separated `name=value` pairs;
/// integers decimal, booleans true|false, enum members bare identifiers,
/// arrays [v0,v1,...], records {field:value,...}; `#` begins a comment line.
/// Values are validated against the node's declared inputs.
Trace parse_trace_text(std::string_view text, const NodeDecl& node,
                       std::string provenance = "");

/// One line in the trace format, pairs in the given order.
std::string format_pairs(const std::vector<std::pair<std::string, Value>>& pairs);

} // namespace scb
