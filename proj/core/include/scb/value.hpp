#pragma once

#include "scb/diag.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace scb {

/// Runtime value shared by the SCADE and B interpreters.
/// Integers carry the range of the slot they were last written into;
/// equality ignores the range and compares content only.
class Value {
public:
    enum class Kind { Int, Bool, Enum, Array, Record };

    Value() : kind_(Kind::Int), int_(0), lo_(0), hi_(0) {}

    static Value make_int(long long v, long long lo, long long hi);
    static Value make_bool(bool b);
    static Value make_enum(std::string set, std::string member);
    static Value make_array(std::vector<Value> cells);
    static Value make_record(std::vector<std::pair<std::string, Value>> fields);

    Kind kind() const { return kind_; }
    long long as_int() const;
    bool as_bool() const;
    const std::string& enum_set() const { return enum_set_; }
    const std::string& enum_member() const;
    const std::vector<Value>& cells() const;
    std::vector<Value>& cells();
    const std::vector<std::pair<std::string, Value>>& fields() const;
    std::vector<std::pair<std::string, Value>>& fields();

    long long range_lo() const { return lo_; }
    long long range_hi() const { return hi_; }

    const Value& field(const std::string& name) const;
    Value& field(const std::string& name);

    bool operator==(const Value& other) const;
    bool operator!=(const Value& other) const { return !(*this == other); }

    /// Canonical text per the trace file format: integers decimal, booleans
    /// true|false, enum members bare, arrays [v0,v1,...], records {f:v,...}.
    std::string to_text() const;

private:
    Kind kind_;
    long long int_ = 0;
    long long lo_ = 0, hi_ = 0;
    bool bool_ = false;
    std::string enum_set_, enum_member_;
    std::vector<Value> cells_;
    std::vector<std::pair<std::string, Value>> fields_;
};

// Checked arithmetic on the unbounded evaluation domain. Division and mod
// truncate toward zero; both fault on a zero divisor. All four fault with
// Overflow if the result cannot be represented in long long.
long long checked_add(long long a, long long b);
long long checked_sub(long long a, long long b);
long long checked_mul(long long a, long long b);
long long checked_div(long long a, long long b);
long long checked_mod(long long a, long long b);

} // namespace scb
