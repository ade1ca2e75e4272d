#pragma once

#include "scb/diag.hpp"
#include "scb/scade_ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace scb {

enum class TokKind {
    Ident,
    Int,
    // punctuation
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Comma, Semi, Colon, Dot, Underscore, Bar,
    // operators
    Plus, Minus, Star, Slash,
    Eq, Ne, Lt, Le, Gt, Ge,
    Caret,          // array type constructor
    LShift, RShift, // << size >> around iterator sizes
    Eof,
};

struct Token {
    TokKind kind = TokKind::Eof;
    std::string text;
    long long int_val = 0;
    SourcePos pos;
};

struct LexOutput {
    std::vector<Token> tokens;
    std::vector<Pragma> pragmas;
};

/// Tokenize SCADE-subset source. `--` starts a line comment; `--@key value`
/// comments are collected as pragmas.
LexOutput lex(std::string_view source);

} // namespace scb
