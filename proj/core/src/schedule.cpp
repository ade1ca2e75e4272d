#include "scb/schedule.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace scb {

namespace {

void reads_of_expr(const Expr& e, std::vector<std::string>& out, bool through_fby) {
    switch (e.kind) {
    case Expr::Kind::VarRef:
        out.push_back(e.name);
        return;
    case Expr::Kind::EnumRef:
    case Expr::Kind::IntLit:
    case Expr::Kind::BoolLit:
        return;
    case Expr::Kind::Fby:
        // the read side of a delay has no current-cycle dependencies;
        // callers interested in the shift handle fby_input themselves
        if (through_fby)
            reads_of_expr(*e.fby_input, out, through_fby);
        if (e.fby_init)
            reads_of_expr(*e.fby_init, out, through_fby);
        return;
    default:
        break;
    }
    for (const auto& a : e.args)
        reads_of_expr(*a, out, through_fby);
    if (e.scrutinee)
        reads_of_expr(*e.scrutinee, out, through_fby);
    for (const auto& arm : e.case_arms) {
        if (arm.pattern)
            reads_of_expr(*arm.pattern, out, through_fby);
        reads_of_expr(*arm.value, out, through_fby);
    }
    if (e.hof_init_cond)
        reads_of_expr(*e.hof_init_cond, out, through_fby);
    for (const auto& d : e.hof_defaults)
        reads_of_expr(*d, out, through_fby);
    for (const auto& a : e.hof_acc_inits)
        reads_of_expr(*a, out, through_fby);
    for (const auto& a : e.hof_arrays)
        reads_of_expr(*a, out, through_fby);
}

void defs_of_items(const std::vector<BodyItemPtr>& items, std::vector<std::string>& out);

void reads_of_items(const std::vector<BodyItemPtr>& items,
                    const std::vector<VarDecl>& locals,
                    std::vector<std::string>& out) {
    std::vector<std::string> inner;
    for (const auto& item : items)
        collect_item_reads(*item, inner);
    std::set<std::string> bound;
    for (const auto& v : locals)
        bound.insert(v.name);
    std::vector<std::string> defs;
    defs_of_items(items, defs);
    bound.insert(defs.begin(), defs.end());
    for (auto& name : inner)
        if (!bound.count(name))
            out.push_back(std::move(name));
}

void defs_of_items(const std::vector<BodyItemPtr>& items, std::vector<std::string>& out) {
    for (const auto& item : items)
        collect_defs(*item, out);
}

} // namespace

void collect_reads(const Expr& expr, std::vector<std::string>& out) {
    reads_of_expr(expr, out, /*through_fby=*/false);
}

void collect_defs(const BodyItem& item, std::vector<std::string>& out) {
    switch (item.kind) {
    case BodyItem::Kind::Equation:
        for (const auto& n : item.equation.lhs)
            out.push_back(n);
        return;
    case BodyItem::Kind::ActivateIf: {
        // both branches define the same outer set; use the then-branch
        std::vector<std::string> defs;
        defs_of_items(item.activate.then_items, defs);
        std::set<std::string> locals;
        for (const auto& v : item.activate.then_locals)
            locals.insert(v.name);
        for (auto& n : defs)
            if (!locals.count(n))
                out.push_back(std::move(n));
        return;
    }
    case BodyItem::Kind::StateMachine: {
        std::set<std::string> seen;
        for (const auto& s : item.machine.states) {
            std::vector<std::string> defs;
            defs_of_items(s.body, defs);
            std::set<std::string> locals;
            for (const auto& v : s.locals)
                locals.insert(v.name);
            for (auto& n : defs)
                if (!locals.count(n))
                    seen.insert(std::move(n));
        }
        out.insert(out.end(), seen.begin(), seen.end());
        return;
    }
    }
}

void collect_item_reads(const BodyItem& item, std::vector<std::string>& out) {
    switch (item.kind) {
    case BodyItem::Kind::Equation:
        // include fby inputs: when this equation sits inside a branch, the
        // buffer shift runs as part of the enclosing item
        reads_of_expr(*item.equation.rhs, out, /*through_fby=*/true);
        return;
    case BodyItem::Kind::ActivateIf: {
        collect_reads(*item.activate.condition, out);
        reads_of_items(item.activate.then_items, item.activate.then_locals, out);
        reads_of_items(item.activate.else_items, item.activate.else_locals, out);
        return;
    }
    case BodyItem::Kind::StateMachine: {
        for (const auto& s : item.machine.states) {
            for (const auto& t : s.transitions)
                collect_reads(*t.condition, out);
            reads_of_items(s.body, s.locals, out);
        }
        return;
    }
    }
}

Schedule build_schedule(const std::vector<BodyItemPtr>& items) {
    struct Node {
        SchedEntry entry;
        std::vector<std::string> reads;
        std::vector<std::string> defs;
        long long key = 0; // stable tie-break: source position, shifts right after their read
        int read_node = -1;
    };
    std::vector<Node> nodes;

    for (size_t i = 0; i < items.size(); ++i) {
        const BodyItem& item = *items[i];
        Node n;
        n.entry = SchedEntry{SchedEntry::Kind::Item, &item, -1};
        n.key = (long long)i * 2;
        collect_defs(item, n.defs);
        bool is_fby_eq = item.kind == BodyItem::Kind::Equation &&
                         item.equation.rhs->kind == Expr::Kind::Fby;
        if (is_fby_eq) {
            // read step: no current-cycle reads
            int read_index = (int)nodes.size();
            nodes.push_back(std::move(n));
            Node shift;
            shift.entry = SchedEntry{SchedEntry::Kind::FbyShift, &item,
                                     item.equation.rhs->fby_id};
            shift.key = (long long)i * 2 + 1;
            collect_reads(*item.equation.rhs->fby_input, shift.reads);
            shift.read_node = read_index;
            nodes.push_back(std::move(shift));
        } else {
            collect_item_reads(item, n.reads);
            nodes.push_back(std::move(n));
        }
    }

    std::map<std::string, int> def_by; // flow -> defining node
    for (size_t i = 0; i < nodes.size(); ++i)
        for (const auto& d : nodes[i].defs)
            def_by[d] = (int)i;

    std::vector<std::vector<int>> succ(nodes.size());
    std::vector<int> pending(nodes.size(), 0);
    for (size_t i = 0; i < nodes.size(); ++i) {
        std::set<int> preds;
        for (const auto& r : nodes[i].reads) {
            auto it = def_by.find(r);
            if (it != def_by.end() && it->second != (int)i)
                preds.insert(it->second);
        }
        if (nodes[i].read_node >= 0)
            preds.insert(nodes[i].read_node);
        for (int p : preds) {
            succ[p].push_back((int)i);
            ++pending[i];
        }
    }

    auto cmp = [&](int a, int b) { return nodes[a].key > nodes[b].key; };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
    for (size_t i = 0; i < nodes.size(); ++i)
        if (pending[i] == 0)
            ready.push((int)i);

    Schedule out;
    while (!ready.empty()) {
        int i = ready.top();
        ready.pop();
        out.push_back(nodes[i].entry);
        for (int s : succ[i])
            if (--pending[s] == 0)
                ready.push(s);
    }

    if (out.size() != nodes.size()) {
        // the residue holds the cycles plus their downstream consumers; peel
        // nodes without residual successors until only cycle members remain
        std::vector<bool> residual(nodes.size());
        for (size_t i = 0; i < nodes.size(); ++i)
            residual[i] = pending[i] > 0;
        bool peeled = true;
        while (peeled) {
            peeled = false;
            for (size_t i = 0; i < nodes.size(); ++i) {
                if (!residual[i])
                    continue;
                bool feeds_residual = false;
                for (int s : succ[i])
                    feeds_residual = feeds_residual || residual[(size_t)s];
                if (!feeds_residual) {
                    residual[i] = false;
                    peeled = true;
                }
            }
        }
        std::set<std::string> cycle_vars;
        SourcePos pos{};
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (residual[i]) {
                for (const auto& d : nodes[i].defs)
                    cycle_vars.insert(d);
                if (nodes[i].entry.item && pos.line == 0)
                    pos = nodes[i].entry.item->pos;
            }
        }
        std::string list;
        for (const auto& v : cycle_vars)
            list += (list.empty() ? "" : ", ") + v;
        throw FrontendError(pos, "instantaneous dependency cycle involving: " + list);
    }
    return out;
}

} // namespace scb
