#include "scb/value.hpp"

#include <climits>

namespace scb {

Value Value::make_int(long long v, long long lo, long long hi) {
    Value out;
    out.kind_ = Kind::Int;
    out.int_ = v;
    out.lo_ = lo;
    out.hi_ = hi;
    return out;
}

Value Value::make_bool(bool b) {
    Value out;
    out.kind_ = Kind::Bool;
    out.bool_ = b;
    return out;
}

Value Value::make_enum(std::string set, std::string member) {
    Value out;
    out.kind_ = Kind::Enum;
    out.enum_set_ = std::move(set);
    out.enum_member_ = std::move(member);
    return out;
}

Value Value::make_array(std::vector<Value> cells) {
    Value out;
    out.kind_ = Kind::Array;
    out.cells_ = std::move(cells);
    return out;
}

Value Value::make_record(std::vector<std::pair<std::string, Value>> fields) {
    Value out;
    out.kind_ = Kind::Record;
    out.fields_ = std::move(fields);
    return out;
}

long long Value::as_int() const {
    if (kind_ != Kind::Int)
        throw EvalError(EvalErrorKind::Internal, "value is not an integer");
    return int_;
}

bool Value::as_bool() const {
    if (kind_ != Kind::Bool)
        throw EvalError(EvalErrorKind::Internal, "value is not a boolean");
    return bool_;
}

const std::string& Value::enum_member() const {
    if (kind_ != Kind::Enum)
        throw EvalError(EvalErrorKind::Internal, "value is not an enum member");
    return enum_member_;
}

const std::vector<Value>& Value::cells() const {
    if (kind_ != Kind::Array)
        throw EvalError(EvalErrorKind::Internal, "value is not an array");
    return cells_;
}

std::vector<Value>& Value::cells() {
    if (kind_ != Kind::Array)
        throw EvalError(EvalErrorKind::Internal, "value is not an array");
    return cells_;
}

const std::vector<std::pair<std::string, Value>>& Value::fields() const {
    if (kind_ != Kind::Record)
        throw EvalError(EvalErrorKind::Internal, "value is not a record");
    return fields_;
}

std::vector<std::pair<std::string, Value>>& Value::fields() {
    if (kind_ != Kind::Record)
        throw EvalError(EvalErrorKind::Internal, "value is not a record");
    return fields_;
}

const Value& Value::field(const std::string& name) const {
    for (const auto& [fname, fval] : fields())
        if (fname == name)
            return fval;
    throw EvalError(EvalErrorKind::Internal, "no record field named " + name);
}

Value& Value::field(const std::string& name) {
    for (auto& [fname, fval] : fields())
        if (fname == name)
            return fval;
    throw EvalError(EvalErrorKind::Internal, "no record field named " + name);
}

bool Value::operator==(const Value& other) const {
    if (kind_ != other.kind_)
        return false;
    switch (kind_) {
    case Kind::Int: return int_ == other.int_;
    case Kind::Bool: return bool_ == other.bool_;
    case Kind::Enum: return enum_member_ == other.enum_member_;
    case Kind::Array: return cells_ == other.cells_;
    case Kind::Record: return fields_ == other.fields_;
    }
    return false;
}

std::string Value::to_text() const {
    switch (kind_) {
    case Kind::Int:
        return std::to_string(int_);
    case Kind::Bool:
        return bool_ ? "true" : "false";
    case Kind::Enum:
        return enum_member_;
    case Kind::Array: {
        std::string out = "[";
        for (size_t i = 0; i < cells_.size(); ++i) {
            if (i) out += ",";
            out += cells_[i].to_text();
        }
        return out + "]";
    }
    case Kind::Record: {
        std::string out = "{";
        for (size_t i = 0; i < fields_.size(); ++i) {
            if (i) out += ",";
            out += fields_[i].first + ":" + fields_[i].second.to_text();
        }
        return out + "}";
    }
    }
    return "?";
}

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r))
        throw EvalError(EvalErrorKind::Overflow, "overflow in addition");
    return r;
}

long long checked_sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r))
        throw EvalError(EvalErrorKind::Overflow, "overflow in subtraction");
    return r;
}

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw EvalError(EvalErrorKind::Overflow, "overflow in multiplication");
    return r;
}

long long checked_div(long long a, long long b) {
    if (b == 0)
        throw EvalError(EvalErrorKind::DivZero, "division by zero");
    if (a == LLONG_MIN && b == -1)
        throw EvalError(EvalErrorKind::Overflow, "overflow in division");
    return a / b; // truncation toward zero
}

long long checked_mod(long long a, long long b) {
    if (b == 0)
        throw EvalError(EvalErrorKind::DivZero, "modulo by zero");
    if (a == LLONG_MIN && b == -1)
        return 0;
    return a % b; // sign follows the dividend
}

} // namespace scb
