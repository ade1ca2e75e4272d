#pragma once

#include "scb/b_ast.hpp"

#include <string>
#include <vector>

namespace scb {

enum class BFlavor { Ascii, Unicode };

/// Render a machine as loadable text: clauses in the order MACHINE, SETS,
/// CONSTANTS, PROPERTIES, VARIABLES, INVARIANT, INITIALISATION, OPERATIONS;
/// empty clauses elided; 4-space indent, LF line endings. Deterministic.
std::string emit_machine(const BMachine& machine, BFlavor flavor = BFlavor::Ascii);

std::string render_pred(const BPred& pred, BFlavor flavor = BFlavor::Ascii);
std::string render_expr(const BExpr& expr, BFlavor flavor = BFlavor::Ascii);
std::string render_subst(const BSubst& subst, BFlavor flavor = BFlavor::Ascii);

/// Token stream of machine text for whitespace-insensitive comparison.
/// Comments are skipped and the handful of unicode operator spellings are
/// normalized to their ASCII forms.
std::vector<std::string> tokenize_machine_text(const std::string& text);

} // namespace scb
