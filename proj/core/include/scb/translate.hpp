#pragma once

#include "scb/b_ast.hpp"
#include "scb/typecheck.hpp"

#include <map>
#include <string>
#include <vector>

namespace scb {

/// How a node's memory maps onto machine variables; the lock-step harness
/// compares through this table rather than guessing names.
struct FbyBinding {
    int fby_id = -1;
    std::string store_var;
    long long depth = 0;
};

struct SmBinding {
    std::string machine_name;
    std::string state_var;
};

struct NodeBinding {
    std::string node_name;
    std::string op_name;
    std::vector<std::string> inputs;  // = operation parameter names
    std::vector<std::string> outputs; // = operation output names
    std::vector<FbyBinding> fbys;
    std::vector<SmBinding> machines;
};

/// Declared types of assignable names, used by the B interpreter to enforce
/// the same write-range discipline as the source semantics. Key "" holds the
/// machine variables; operations are keyed by name. Synthesized loop locals
/// are deliberately absent: like operator-internal values, they are
/// mathematical intermediates.
using TypeTable = std::map<std::string, std::map<std::string, TypePtr>>;

struct TranslationResult {
    BMachine machine;
    std::vector<NodeBinding> bindings;
    TypeTable types;
    std::vector<std::string> warnings;

    const NodeBinding& binding_for(const std::string& node_name) const;
};

struct TranslateOptions {
    std::string machine_name; // overrides the --@machine pragma
};

/// Apply the mapping rules to a typechecked program: types and constants to
/// SETS/CONSTANTS/PROPERTIES, each node to one operation, delays to shift
/// buffers, state machines to CASE dispatch over a state variable, and
/// iterators to annotated WHILE loops. Deterministic. Throws TranslateError
/// on constructs outside the translatable subset.
TranslationResult translate(const TypedProgram& program,
                            const TranslateOptions& options = {});

} // namespace scb
