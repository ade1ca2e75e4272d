#pragma once

#include "scb/scade_ast.hpp"

#include <string>

namespace scb {

/// Canonical printer for the SCADE subset. Printing a parsed program and
/// re-parsing the result yields a structurally identical AST.
std::string print_program(const ScadeProgram& program);
std::string print_expr(const Expr& expr);

/// Structural equality ignoring source positions and typecheck annotations.
bool ast_equal(const ScadeProgram& a, const ScadeProgram& b);
bool ast_equal(const Expr& a, const Expr& b);

} // namespace scb
