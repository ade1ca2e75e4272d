#include "scb/b_validate.hpp"

#include <functional>
#include <set>

namespace scb {

namespace {

void assigned_names(const BSubst& s, std::set<std::string>& out) {
    switch (s.kind) {
    case BSubst::Kind::Assign:
        for (const auto& lv : s.lvalues)
            out.insert(lv.name);
        return;
    case BSubst::Kind::If:
        for (const auto& br : s.branches)
            assigned_names(*br.body, out);
        if (s.else_sub)
            assigned_names(*s.else_sub, out);
        return;
    case BSubst::Kind::Case:
        for (const auto& arm : s.arms)
            assigned_names(*arm.body, out);
        if (s.else_sub)
            assigned_names(*s.else_sub, out);
        return;
    case BSubst::Kind::While:
        assigned_names(*s.while_body, out);
        return;
    case BSubst::Kind::Var: {
        std::set<std::string> inner;
        assigned_names(*s.var_body, inner);
        for (const auto& n : s.var_names)
            inner.erase(n);
        out.insert(inner.begin(), inner.end());
        return;
    }
    case BSubst::Kind::Seq:
    case BSubst::Kind::Parallel:
        for (const auto& sub : s.subs)
            assigned_names(*sub, out);
        return;
    case BSubst::Kind::Skip:
        return;
    case BSubst::Kind::OpCall:
        for (const auto& n : s.call_outputs)
            out.insert(n);
        return;
    }
}

class Validator {
public:
    explicit Validator(const BMachine& m) : m_(m) {}

    std::vector<std::string> run() {
        check_invariant_typing();
        check_initialisation();
        for (const auto& op : m_.operations)
            check_operation(op);
        return std::move(diags_);
    }

private:
    const BMachine& m_;
    std::vector<std::string> diags_;

    void report(std::string msg) { diags_.push_back(std::move(msg)); }

    static bool is_typing_of(const BPred& p, const std::string& var) {
        return p.kind == BPred::Kind::Member && p.elem &&
               p.elem->kind == BExpr::Kind::Ref && p.elem->name == var;
    }

    void check_invariant_typing() {
        for (const auto& var : m_.variables) {
            int count = 0;
            for (const auto& conj : m_.invariant)
                if (is_typing_of(*conj, var))
                    ++count;
            if (count == 0)
                report("variable not typed by the invariant: " + var);
            else if (count > 1)
                report("variable typed more than once: " + var);
        }
        for (const auto& conj : m_.invariant)
            check_pred(*conj, "INVARIANT");
    }

    void check_initialisation() {
        if (m_.variables.empty())
            return;
        if (!m_.initialisation) {
            report("machine has variables but no initialisation");
            return;
        }
        std::set<std::string> assigned;
        assigned_names(*m_.initialisation, assigned);
        for (const auto& var : m_.variables)
            if (!assigned.count(var))
                report("variable not initialised: " + var);
        check_subst(*m_.initialisation, "INITIALISATION");
    }

    void check_operation(const BOperation& op) {
        for (const auto& param : op.params) {
            int count = 0;
            for (const auto& conj : op.pre)
                if (is_typing_of(*conj, param))
                    ++count;
            if (count == 0)
                report("parameter not typed by PRE: " + op.name + "." + param);
        }
        for (const auto& conj : op.pre)
            check_pred(*conj, op.name);
        if (!op.body) {
            report("operation without a body: " + op.name);
            return;
        }
        check_subst(*op.body, op.name);
    }

    void check_subst(const BSubst& s, const std::string& where) {
        switch (s.kind) {
        case BSubst::Kind::Assign:
            if (s.lvalues.empty() || s.lvalues.size() != s.exprs.size())
                report("malformed assignment in " + where);
            return;
        case BSubst::Kind::If:
            if (s.branches.empty())
                report("IF without branches in " + where);
            for (const auto& br : s.branches) {
                check_pred(*br.cond, where);
                check_subst(*br.body, where);
            }
            if (s.else_sub)
                check_subst(*s.else_sub, where);
            return;
        case BSubst::Kind::Case:
            if (s.arms.empty())
                report("CASE without arms in " + where);
            for (const auto& arm : s.arms)
                check_subst(*arm.body, where);
            if (s.else_sub)
                check_subst(*s.else_sub, where);
            return;
        case BSubst::Kind::While:
            if (!s.invariant)
                report("WHILE without INVARIANT in " + where);
            else
                check_pred(*s.invariant, where);
            if (!s.variant)
                report("WHILE without VARIANT in " + where);
            check_pred(*s.while_cond, where);
            check_subst(*s.while_body, where);
            return;
        case BSubst::Kind::Var:
            check_subst(*s.var_body, where);
            return;
        case BSubst::Kind::Seq:
            for (const auto& sub : s.subs)
                check_subst(*sub, where);
            return;
        case BSubst::Kind::Parallel: {
            std::set<std::string> all;
            size_t total = 0;
            for (const auto& sub : s.subs) {
                std::set<std::string> branch;
                assigned_names(*sub, branch);
                total += branch.size();
                all.insert(branch.begin(), branch.end());
                check_subst(*sub, where);
            }
            if (all.size() != total)
                report("parallel branches write overlapping variables in " + where);
            return;
        }
        case BSubst::Kind::Skip:
            return;
        case BSubst::Kind::OpCall:
            if (!m_.find_operation(s.call_op))
                report("call to unknown operation '" + s.call_op + "' in " + where);
            return;
        }
    }

    void check_pred(const BPred& p, const std::string& where) {
        switch (p.kind) {
        case BPred::Kind::And:
        case BPred::Kind::Or:
        case BPred::Kind::Implies:
        case BPred::Kind::Not:
            for (const auto& sub : p.preds)
                check_pred(*sub, where);
            return;
        case BPred::Kind::Forall:
            // evaluation enumerates the range; it must be syntactically finite
            if (!p.lo || !p.hi)
                report("quantifier without a finite range in " + where);
            if (p.guard)
                check_pred(*p.guard, where);
            if (p.body)
                check_pred(*p.body, where);
            else
                report("quantifier without a body in " + where);
            return;
        case BPred::Kind::Compare:
        case BPred::Kind::Member:
            return;
        }
    }
};

} // namespace

std::vector<std::string> validate_machine(const BMachine& machine) {
    return Validator(machine).run();
}

} // namespace scb
