#pragma once

#include "scb/b_ast.hpp"

#include <string>
#include <vector>

namespace scb {

/// Structural diagnostics; empty means the machine is well formed:
/// every variable typed by exactly one invariant conjunct and assigned by the
/// initialisation, every parameter typed by a PRE conjunct, every WHILE
/// carrying INVARIANT and VARIANT, parallel branches writing disjoint names,
/// and quantifier domains being syntactic finite ranges.
std::vector<std::string> validate_machine(const BMachine& machine);

} // namespace scb
