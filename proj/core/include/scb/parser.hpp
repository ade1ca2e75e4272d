#pragma once

#include "scb/scade_ast.hpp"

#include <string_view>

namespace scb {

/// Parse SCADE-subset source text. Throws FrontendError on syntax errors,
/// duplicate declarations in the same namespace, and malformed pragmas.
/// The accepted grammar is documented in docs/language.md.
ScadeProgram parse_program(std::string_view source);

} // namespace scb
