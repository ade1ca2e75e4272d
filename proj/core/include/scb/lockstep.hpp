#pragma once

#include "scb/b_eval.hpp"
#include "scb/scade_eval.hpp"
#include "scb/trace_io.hpp"
#include "scb/translate.hpp"

#include <cstdint>
#include <string>

namespace scb {

/// Outcome of driving the node and its translated operation in lock-step.
struct DiffReport {
    enum class Status { Equivalent, Divergent };
    enum class DivergenceKind { None, Output, MappedState, Error };

    Status status = Status::Equivalent;
    int cycles_compared = 0;

    // first divergence, 1-based cycle index
    int cycle = 0;
    DivergenceKind kind = DivergenceKind::None;
    std::string name;
    std::string scade_value;
    std::string b_value;

    // WHILE INVARIANT/VARIANT instrumentation across all cycles
    int loop_diagnostics = 0;

    bool equivalent() const { return status == Status::Equivalent; }
};

/// Per cycle: step the node, invoke the operation with identical inputs,
/// compare every output, then the mapped state (delay buffer against its
/// store variable cellwise, active state against the state variable). Stops
/// at the first divergence. A runtime fault on either side diverges unless
/// both sides fault with the same kind, which ends the comparison as
/// equivalent.
DiffReport run_lockstep(const TypedProgram& program, const NodeDecl& node,
                        const TranslationResult& translation, const Trace& trace);

/// Deterministic pseudorandom trace, uniform over each input's declared
/// range; identical seeds yield identical traces.
Trace generate_trace(const NodeDecl& node, uint64_t seed, int length);

} // namespace scb
