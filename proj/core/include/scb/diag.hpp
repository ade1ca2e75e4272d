#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace scb {

struct SourcePos {
    int line = 0;
    int col = 0;
};

inline std::string format_pos(const std::string& file, SourcePos pos) {
    return file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col);
}

/// Frontend failure: syntax error, duplicate declaration, type mismatch, ...
/// Carries the position of the offending token so the CLI can print
/// `file:line:col: message`.
class FrontendError : public std::runtime_error {
public:
    FrontendError(SourcePos pos, std::string message)
        : std::runtime_error(std::move(message)), pos_(pos) {}

    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

/// Error classes shared by both interpreters. Lock-step comparison treats
/// two sides that fail with the same kind as matching outcomes.
enum class EvalErrorKind {
    Range,         // write outside a declared range, index out of bounds
    DivZero,
    Overflow,      // intermediate arithmetic left the machine-word envelope
    PreViolation,  // operation called outside its precondition / bad input
    MissingInput,
    Invariant,     // machine invariant broken where that is a hard error
    Internal,      // schedule or translation bug; should never fire
};

inline const char* to_string(EvalErrorKind kind) {
    switch (kind) {
    case EvalErrorKind::Range: return "range error";
    case EvalErrorKind::DivZero: return "division by zero";
    case EvalErrorKind::Overflow: return "arithmetic overflow";
    case EvalErrorKind::PreViolation: return "precondition violation";
    case EvalErrorKind::MissingInput: return "missing input";
    case EvalErrorKind::Invariant: return "invariant violation";
    case EvalErrorKind::Internal: return "internal error";
    }
    return "?";
}

class EvalError : public std::runtime_error {
public:
    EvalError(EvalErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    EvalErrorKind kind() const { return kind_; }

private:
    EvalErrorKind kind_;
};

class TranslateError : public std::runtime_error {
public:
    explicit TranslateError(std::string message)
        : std::runtime_error(std::move(message)) {}
};

} // namespace scb
