#pragma once

#include "scb/scade_ast.hpp"

#include <vector>

namespace scb {

/// One step of a scope's execution order. A delayed-flow equation
/// `x = fby(e; n; a)` contributes two steps: an Item step performing the
/// buffer read (defines x, reads nothing of the current cycle) and a
/// FbyShift step pushing the current value of `e` into the buffer. The
/// shift is placed as early as possible after the read, once every flow
/// `e` depends on has been computed.
struct SchedEntry {
    enum class Kind { Item, FbyShift };
    Kind kind = Kind::Item;
    const BodyItem* item = nullptr;
    int fby_id = -1; // FbyShift only
};

using Schedule = std::vector<SchedEntry>;

/// Order one scope's body items so every flow is assigned before it is
/// read within a cycle. Reading through fby does not count as a
/// current-cycle dependency. Deterministic: ties break on source order.
/// Throws FrontendError listing the offending flows when the items contain
/// an instantaneous cycle.
Schedule build_schedule(const std::vector<BodyItemPtr>& items);

/// Current-cycle flow names read by an expression (enum members and
/// literals excluded; fby inputs excluded — the shift accounts for them).
void collect_reads(const Expr& expr, std::vector<std::string>& out);

/// Flow names an item defines in its own scope (branch locals excluded).
void collect_defs(const BodyItem& item, std::vector<std::string>& out);

/// Free reads of an item: everything read inside minus what the item
/// defines internally (including branch locals).
void collect_item_reads(const BodyItem& item, std::vector<std::string>& out);

} // namespace scb
