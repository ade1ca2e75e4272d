#pragma once

#include "scb/scade_ast.hpp"
#include "scb/value.hpp"

#include <map>
#include <string>
#include <vector>

namespace scb {

struct FbyInfo {
    int id = -1;
    long long depth = 0;
    Value init;
    TypePtr flow_type;
};

struct NodeInfo {
    std::vector<FbyInfo> fbys;              // indexed by fby_id
    std::vector<std::string> machine_names; // in source order, including nested
};

/// A validated program: every Expr carries a resolved type, fby and iterator
/// instances are numbered, constants are evaluated.
struct TypedProgram {
    ScadeProgram program;
    std::map<std::string, NodeInfo> node_info;        // by node name
    std::map<std::string, Value> const_values;        // by constant name
    std::map<std::string, TypePtr> resolved_types;    // declared name -> resolved
    std::map<std::string, std::string> enum_member_set; // member -> enum name
    std::map<std::string, int> enum_member_index;

    const NodeDecl& node(const std::string& name) const;
    const NodeInfo& info(const std::string& name) const;
};

/// Typecheck a parsed program. Throws FrontendError on type mismatches,
/// out-of-range literals, arity errors, and single-assignment violations.
TypedProgram typecheck(ScadeProgram program);

/// Default value of a resolved type: 0 / false / first member / cellwise.
Value default_value(const TypeExpr& type,
                    const std::map<std::string, int>& enum_member_index);

/// Validate a runtime value against a resolved type and rebind integer range
/// metadata. Throws EvalError(Range) on range violations and shape mismatches.
Value coerce_value(Value v, const TypeExpr& type);

} // namespace scb
