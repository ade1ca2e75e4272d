#pragma once

#include "scb/typecheck.hpp"
#include "scb/value.hpp"

#include <map>
#include <string>
#include <vector>

namespace scb {

/// Per-node memory between cycles: delay buffers and active states.
struct NodeState {
    std::map<int, std::vector<Value>> fby_buffers;   // fby_id -> buffer, head is oldest
    std::map<std::string, std::string> sm_states;    // machine name -> active state

    bool operator==(const NodeState&) const = default;
};

using CycleValues = std::map<std::string, Value>;

/// Fresh state: every delay buffer filled with its initialisation literal,
/// every machine at its initial state.
NodeState init_state(const TypedProgram& program, const NodeDecl& node);

/// Run one synchronous cycle. Evaluates the node body in dependency order,
/// mutating `state` in place, and returns the outputs. Inputs must cover all
/// declared inputs with in-range values. Throws EvalError on range
/// violations, division by zero, and missing inputs.
CycleValues step(const TypedProgram& program, const NodeDecl& node, NodeState& state,
                 const CycleValues& inputs);

/// Evaluate one iterator application given its argument environment. Exposed
/// separately so the iterator semantics can be tested against the defining
/// recurrences in isolation. Results are in left-hand-side binding order.
std::vector<Value> eval_higher_order(const TypedProgram& program, const Expr& app,
                                     const CycleValues& env);

/// Apply a stateless operator to argument values; results in output order.
std::vector<Value> call_function(const TypedProgram& program, const NodeDecl& fn,
                                 const std::vector<Value>& args);

} // namespace scb
