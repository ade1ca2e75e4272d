#pragma once

#include "scb/b_ast.hpp"
#include "scb/translate.hpp"
#include "scb/value.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace scb {

struct BState {
    std::map<std::string, Value> valuation;

    bool operator==(const BState&) const = default;
};

enum class BDiagKind {
    PreViolation,
    InvariantViolation,   // machine invariant (deferred mode) or loop invariant
    VariantViolation,     // negative or non-decreasing loop variant
    RangeError,           // write outside a declared range, or a runtime fault
    NonDisjointParallel,
};

struct BDiag {
    BDiagKind kind = BDiagKind::RangeError;
    std::string location; // operation / clause / loop iteration
    std::string detail;
    EvalErrorKind fault = EvalErrorKind::Internal; // for RangeError diagnostics
};

struct InvokeResult {
    bool ok = true; // false: execution aborted, state is the pre-state
    std::map<std::string, Value> outputs;
    BState state;
    std::vector<BDiag> diagnostics;

    /// Loop-annotation diagnostics only (INVARIANT/VARIANT instrumentation).
    int loop_diagnostics() const;
};

struct InvokeOptions {
    /// Leave the machine invariant to the caller (reachability checking must
    /// enter violating states to report them).
    bool defer_machine_invariant = false;
    const TypeTable* types = nullptr;
};

/// Execute INITIALISATION (parallel branches simultaneously) and check the
/// invariant. Throws EvalError(Invariant) when initialisation violates it,
/// unless `check` is false (reachability checking reports that case itself).
BState init_machine(const BMachine& machine, const TypeTable* types = nullptr,
                    bool check = true);

/// Invoke one operation: check PRE, run the body with WHILE INVARIANT /
/// VARIANT instrumentation, return the outputs and post-state. All reported
/// conditions arrive as diagnostics; no exceptions escape for input-dependent
/// failures.
InvokeResult invoke(const BMachine& machine, const BState& state, const std::string& op_name,
                    const std::vector<Value>& args, const InvokeOptions& options = {});

struct InvariantCheck {
    bool holds = true;
    int failing_conjunct = -1;
    std::string rendering; // failing conjunct as text
};

InvariantCheck check_invariant(const BMachine& machine, const BState& state);

} // namespace scb
