#include "scb/translate.hpp"

#include "scb/b_pred_parse.hpp"
#include "scb/schedule.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

namespace scb {

namespace {

// ---------------------------------------------------------------------------
// source-level simplification
//
// The mapping rules work equation by equation, but the dataflow style leans
// on chains of single-use locals (L13 = input; L12 = f(L13); output = L12)
// that would bloat the machine with VAR noise. Two passes restore the shape
// a human modeler would write: pure single-use locals are substituted into
// their use site, and a copy `y = L` whose source is a delay/iterator/call
// result renames that definition to assign y directly.
// ---------------------------------------------------------------------------

int count_var_uses(const Expr& e, const std::string& name) {
    int n = 0;
    if (e.kind == Expr::Kind::VarRef && e.name == name)
        ++n;
    for (const auto& a : e.args)
        n += count_var_uses(*a, name);
    if (e.scrutinee)
        n += count_var_uses(*e.scrutinee, name);
    for (const auto& arm : e.case_arms) {
        if (arm.pattern)
            n += count_var_uses(*arm.pattern, name);
        n += count_var_uses(*arm.value, name);
    }
    if (e.fby_input)
        n += count_var_uses(*e.fby_input, name);
    if (e.fby_init)
        n += count_var_uses(*e.fby_init, name);
    if (e.hof_init_cond)
        n += count_var_uses(*e.hof_init_cond, name);
    for (const auto& d : e.hof_defaults)
        n += count_var_uses(*d, name);
    for (const auto& a : e.hof_acc_inits)
        n += count_var_uses(*a, name);
    for (const auto& a : e.hof_arrays)
        n += count_var_uses(*a, name);
    return n;
}

int count_item_uses(const BodyItem& item, const std::string& name) {
    int n = 0;
    switch (item.kind) {
    case BodyItem::Kind::Equation:
        return count_var_uses(*item.equation.rhs, name);
    case BodyItem::Kind::ActivateIf:
        n += count_var_uses(*item.activate.condition, name);
        for (const auto& it : item.activate.then_items)
            n += count_item_uses(*it, name);
        for (const auto& it : item.activate.else_items)
            n += count_item_uses(*it, name);
        return n;
    case BodyItem::Kind::StateMachine:
        for (const auto& s : item.machine.states) {
            for (const auto& t : s.transitions)
                n += count_var_uses(*t.condition, name);
            for (const auto& it : s.body)
                n += count_item_uses(*it, name);
        }
        return n;
    }
    return n;
}

void subst_var_expr(ExprPtr& e, const std::string& name, const Expr& replacement) {
    if (e->kind == Expr::Kind::VarRef && e->name == name) {
        auto copy = replacement.clone();
        copy->pos = e->pos;
        e = std::move(copy);
        return;
    }
    for (auto& a : e->args)
        subst_var_expr(a, name, replacement);
    if (e->scrutinee)
        subst_var_expr(e->scrutinee, name, replacement);
    for (auto& arm : e->case_arms) {
        if (arm.pattern)
            subst_var_expr(arm.pattern, name, replacement);
        subst_var_expr(arm.value, name, replacement);
    }
    if (e->fby_input)
        subst_var_expr(e->fby_input, name, replacement);
    if (e->fby_init)
        subst_var_expr(e->fby_init, name, replacement);
    if (e->hof_init_cond)
        subst_var_expr(e->hof_init_cond, name, replacement);
    for (auto& d : e->hof_defaults)
        subst_var_expr(d, name, replacement);
    for (auto& a : e->hof_acc_inits)
        subst_var_expr(a, name, replacement);
    for (auto& a : e->hof_arrays)
        subst_var_expr(a, name, replacement);
}

void subst_var_items(std::vector<BodyItemPtr>& items, const std::string& name,
                     const Expr& replacement) {
    for (auto& item : items) {
        switch (item->kind) {
        case BodyItem::Kind::Equation:
            subst_var_expr(item->equation.rhs, name, replacement);
            break;
        case BodyItem::Kind::ActivateIf:
            subst_var_expr(item->activate.condition, name, replacement);
            subst_var_items(item->activate.then_items, name, replacement);
            subst_var_items(item->activate.else_items, name, replacement);
            break;
        case BodyItem::Kind::StateMachine:
            for (auto& s : item->machine.states) {
                for (auto& t : s.transitions)
                    subst_var_expr(t.condition, name, replacement);
                subst_var_items(s.body, name, replacement);
            }
            break;
        }
    }
}

bool contains_state(const Expr& e) {
    if (e.kind == Expr::Kind::Fby || e.kind == Expr::Kind::HigherOrder ||
        e.kind == Expr::Kind::Call)
        return true;
    for (const auto& a : e.args)
        if (contains_state(*a))
            return true;
    if (e.scrutinee && contains_state(*e.scrutinee))
        return true;
    for (const auto& arm : e.case_arms) {
        if (arm.pattern && contains_state(*arm.pattern))
            return true;
        if (contains_state(*arm.value))
            return true;
    }
    return false;
}

void simplify_scope(std::vector<BodyItemPtr>& items, std::vector<VarDecl>& locals) {
    // pass 1: substitute pure local definitions into their use sites
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t li = 0; li < locals.size(); ++li) {
            const std::string& name = locals[li].name;
            size_t def_index = items.size();
            for (size_t i = 0; i < items.size(); ++i) {
                if (items[i]->kind == BodyItem::Kind::Equation &&
                    items[i]->equation.lhs.size() == 1 && items[i]->equation.lhs[0] == name) {
                    def_index = i;
                    break;
                }
            }
            if (def_index == items.size())
                continue;
            const Expr& rhs = *items[def_index]->equation.rhs;
            if (contains_state(rhs) || count_var_uses(rhs, name) > 0)
                continue;
            bool trivial = rhs.kind == Expr::Kind::VarRef || rhs.kind == Expr::Kind::EnumRef ||
                           rhs.kind == Expr::Kind::IntLit || rhs.kind == Expr::Kind::BoolLit;
            int uses = 0;
            for (size_t i = 0; i < items.size(); ++i)
                if (i != def_index)
                    uses += count_item_uses(*items[i], name);
            if (!trivial && uses > 1)
                continue;
            ExprPtr replacement = items[def_index]->equation.rhs->clone();
            items.erase(items.begin() + (long)def_index);
            subst_var_items(items, name, *replacement);
            locals.erase(locals.begin() + (long)li);
            changed = true;
            break;
        }
    }

    // pass 2: `y = L` where the local L is produced by a delay, iterator or
    // call used nowhere else — retarget the producing equation at y
    changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < items.size(); ++i) {
            if (items[i]->kind != BodyItem::Kind::Equation)
                continue;
            const Equation& copy = items[i]->equation;
            if (copy.lhs.size() != 1 || copy.rhs->kind != Expr::Kind::VarRef)
                continue;
            const std::string src = copy.rhs->name;
            auto lit = std::find_if(locals.begin(), locals.end(),
                                    [&](const VarDecl& v) { return v.name == src; });
            if (lit == locals.end())
                continue;
            size_t def_index = items.size();
            size_t lhs_pos = 0;
            for (size_t j = 0; j < items.size(); ++j) {
                if (j == i || items[j]->kind != BodyItem::Kind::Equation)
                    continue;
                auto& lhs = items[j]->equation.lhs;
                auto found = std::find(lhs.begin(), lhs.end(), src);
                if (found != lhs.end()) {
                    def_index = j;
                    lhs_pos = (size_t)(found - lhs.begin());
                    break;
                }
            }
            if (def_index == items.size() || !contains_state(*items[def_index]->equation.rhs))
                continue;
            int uses = 0;
            for (size_t j = 0; j < items.size(); ++j)
                if (j != i)
                    uses += count_item_uses(*items[j], src);
            if (uses != 0)
                continue;
            items[def_index]->equation.lhs[lhs_pos] = copy.lhs[0];
            items.erase(items.begin() + (long)i);
            locals.erase(lit);
            changed = true;
            break;
        }
    }

    // recurse into nested scopes
    for (auto& item : items) {
        if (item->kind == BodyItem::Kind::ActivateIf) {
            simplify_scope(item->activate.then_items, item->activate.then_locals);
            simplify_scope(item->activate.else_items, item->activate.else_locals);
        } else if (item->kind == BodyItem::Kind::StateMachine) {
            for (auto& s : item->machine.states)
                simplify_scope(s.body, s.locals);
        }
    }
}

// ---------------------------------------------------------------------------
// translator
// ---------------------------------------------------------------------------

const char* kBaseOrder[] = {"uint32_t", "uint16_t", "uint8_t", "int32_t", "int16_t", "int8_t"};

class Translator {
public:
    Translator(const TypedProgram& prog, const TranslateOptions& opts)
        : prog_(prog), opts_(opts) {}

    TranslationResult run() {
        collect_global_names();
        result_.machine.name = machine_name();
        for (const auto& decl : prog_.program.types)
            if (decl.type->kind == TypeExpr::Kind::Enum)
                result_.machine.sets.push_back(BSet{decl.name, decl.type->members});

        for (const auto& node : prog_.program.nodes) {
            if (node.is_function || node.body.empty())
                continue;
            translate_node(node);
        }

        emit_constants();
        append_invariant_pragma();
        build_initialisation();
        return std::move(result_);
    }

private:
    const TypedProgram& prog_;
    const TranslateOptions& opts_;
    TranslationResult result_;

    std::set<std::string> taken_names_;          // everything a synthesized name must avoid
    std::set<std::string> used_base_;            // base type constants referenced
    std::vector<std::string> struct_order_;      // struct defs in first-use order
    std::set<std::string> struct_emitted_;
    std::vector<std::pair<std::string, BSubstPtr>> var_inits_; // per machine variable
    std::set<std::string> aux_ops_emitted_;      // fallback operator operations
    int fby_total_ = 0;

    // per-node state
    const NodeDecl* node_ = nullptr;
    NodeBinding* binding_ = nullptr;
    std::map<std::string, TypePtr>* op_types_ = nullptr;
    std::vector<std::string> op_locals_;         // surviving locals, VAR-scoped
    std::set<std::string> node_flow_names_;

    [[noreturn]] void fail(const std::string& msg) const { throw TranslateError(msg); }

    std::string machine_name() const {
        if (!opts_.machine_name.empty())
            return opts_.machine_name;
        if (auto p = prog_.program.pragma_value("machine"))
            return *p;
        for (const auto& n : prog_.program.nodes)
            if (!n.is_function)
                return n.name;
        return "machine";
    }

    void collect_global_names() {
        for (const auto& t : prog_.program.types) {
            taken_names_.insert(t.name);
            if (t.type->kind == TypeExpr::Kind::Enum)
                for (const auto& m : t.type->members)
                    taken_names_.insert(m);
        }
        for (const auto& c : prog_.program.consts)
            taken_names_.insert(c.name);
        for (const auto& n : prog_.program.nodes) {
            taken_names_.insert(n.name);
            for (const auto& v : n.inputs) taken_names_.insert(v.name);
            for (const auto& v : n.outputs) taken_names_.insert(v.name);
            for (const auto& v : n.locals) taken_names_.insert(v.name);
            collect_scope_names(n.body);
        }
        for (const char* b : kBaseOrder)
            taken_names_.insert(b);
        taken_names_.insert("BOOL");
    }

    void collect_scope_names(const std::vector<BodyItemPtr>& items) {
        for (const auto& item : items) {
            if (item->kind == BodyItem::Kind::ActivateIf) {
                for (const auto& v : item->activate.then_locals) taken_names_.insert(v.name);
                for (const auto& v : item->activate.else_locals) taken_names_.insert(v.name);
                collect_scope_names(item->activate.then_items);
                collect_scope_names(item->activate.else_items);
            } else if (item->kind == BodyItem::Kind::StateMachine) {
                taken_names_.insert(item->machine.name);
                for (const auto& s : item->machine.states) {
                    taken_names_.insert(s.name);
                    for (const auto& v : s.locals) taken_names_.insert(v.name);
                    collect_scope_names(s.body);
                }
            }
        }
    }

    std::string fresh_name(const std::string& base) {
        if (taken_names_.insert(base).second)
            return base;
        for (int k = 0;; ++k) {
            std::string candidate = base + "_" + std::to_string(k);
            if (taken_names_.insert(candidate).second)
                return candidate;
        }
    }

    // ---- types ------------------------------------------------------------

    BDomainPtr domain_of(const TypeExpr& t) {
        switch (t.kind) {
        case TypeExpr::Kind::Base: {
            if (t.base == BaseType::Bool)
                return b_domain_name("BOOL");
            used_base_.insert(base_type_b_name(t.base));
            return b_domain_name(base_type_b_name(t.base));
        }
        case TypeExpr::Kind::Enum:
            return b_domain_name(t.name);
        case TypeExpr::Kind::Array: {
            BExprPtr hi;
            if (!t.size_name.empty())
                hi = b_binary(BBinOp::Sub, b_ref(t.size_name), b_int(1));
            else
                hi = b_int(t.size - 1);
            return b_domain_fun(b_domain_interval(b_int(0), std::move(hi)),
                                domain_of(*t.elem));
        }
        case TypeExpr::Kind::Struct: {
            require_struct_def(t);
            return b_domain_name(t.name);
        }
        case TypeExpr::Kind::Named:
            break;
        }
        fail("unresolved type reached translation");
    }

    void require_struct_def(const TypeExpr& t) {
        if (!struct_emitted_.insert(t.name).second)
            return;
        auto d = std::make_unique<BDomain>();
        d->kind = BDomain::Kind::StructSet;
        for (const auto& [fname, ftype] : t.fields)
            d->fields.emplace_back(fname, domain_of(*ftype));
        BProperty prop;
        prop.name = t.name;
        prop.domain = std::move(d);
        result_.machine.properties.push_back(std::move(prop));
        struct_order_.push_back(t.name);
    }

    BExprPtr value_to_bexpr(const Value& v) {
        switch (v.kind()) {
        case Value::Kind::Int:
            return b_int(v.as_int());
        case Value::Kind::Bool:
            return b_bool(v.as_bool());
        case Value::Kind::Enum:
            return b_ref(v.enum_member());
        case Value::Kind::Array: {
            auto e = std::make_unique<BExpr>();
            e->kind = BExpr::Kind::MapletSet;
            for (size_t i = 0; i < v.cells().size(); ++i)
                e->maplets.emplace_back(b_int((long long)i), value_to_bexpr(v.cells()[i]));
            return e;
        }
        case Value::Kind::Record: {
            auto e = std::make_unique<BExpr>();
            e->kind = BExpr::Kind::Record;
            for (const auto& [f, fv] : v.fields())
                e->fields.emplace_back(f, value_to_bexpr(fv));
            return e;
        }
        }
        fail("untranslatable value");
    }

    BExprPtr default_bexpr(const TypeExpr& t) {
        return value_to_bexpr(default_value(t, prog_.enum_member_index));
    }

    // ---- constants clause ---------------------------------------------------

    void emit_constants() {
        auto& m = result_.machine;
        std::vector<std::string> constants;
        std::vector<BProperty> properties;
        for (const char* base : kBaseOrder) {
            if (!used_base_.count(base))
                continue;
            constants.push_back(base);
            long long lo = 0, hi = 0;
            for (BaseType bt : {BaseType::UInt32, BaseType::UInt16, BaseType::UInt8,
                                BaseType::Int32, BaseType::Int16, BaseType::Int8}) {
                if (std::string(base_type_b_name(bt)) == base)
                    base_type_range(bt, lo, hi);
            }
            BProperty p;
            p.name = base;
            p.domain = b_domain_interval(b_int(lo), b_int(hi));
            properties.push_back(std::move(p));
        }
        for (const auto& c : prog_.program.consts) {
            constants.push_back(c.name);
            BProperty p;
            p.name = c.name;
            p.value = value_to_bexpr(prog_.const_values.at(c.name));
            properties.push_back(std::move(p));
        }
        // struct definitions were appended to machine.properties on first use
        for (auto& sp : m.properties) {
            constants.push_back(sp.name);
            properties.push_back(std::move(sp));
        }
        m.constants = std::move(constants);
        m.properties = std::move(properties);
    }

    void append_invariant_pragma() {
        auto text = prog_.program.pragma_value("invariant");
        if (!text)
            return;
        BPredPtr parsed = parse_b_predicate(*text);
        // flatten the top-level conjunction into machine conjuncts
        std::function<void(BPredPtr)> flatten = [&](BPredPtr p) {
            if (p->kind == BPred::Kind::And) {
                flatten(std::move(p->preds[0]));
                flatten(std::move(p->preds[1]));
            } else {
                result_.machine.invariant.push_back(std::move(p));
            }
        };
        flatten(std::move(parsed));
    }

    void build_initialisation() {
        if (var_inits_.empty())
            return;
        auto par = std::make_unique<BSubst>();
        par->kind = BSubst::Kind::Parallel;
        for (auto& [_, sub] : var_inits_)
            par->subs.push_back(std::move(sub));
        result_.machine.initialisation = std::move(par);
    }

    void add_variable(const std::string& name, BDomainPtr domain, BSubstPtr init,
                      TypePtr runtime_type) {
        result_.machine.variables.push_back(name);
        result_.machine.invariant.push_back(b_member(b_ref(name), std::move(domain)));
        var_inits_.emplace_back(name, std::move(init));
        result_.types[""][name] = std::move(runtime_type);
    }

    // ---- node translation ----------------------------------------------------

    void translate_node(const NodeDecl& original) {
        node_ = &original;
        node_flow_names_.clear();
        op_locals_.clear();

        // simplify a private copy of the body
        NodeDecl node;
        node.name = original.name;
        node.inputs = original.inputs;
        node.outputs = original.outputs;
        node.locals = original.locals;
        node.body = clone_items(original.body);
        simplify_scope(node.body, node.locals);

        NodeBinding binding;
        binding.node_name = original.name;
        binding.op_name = original.name;
        for (const auto& v : original.inputs)
            binding.inputs.push_back(v.name);
        for (const auto& v : original.outputs)
            binding.outputs.push_back(v.name);
        result_.bindings.push_back(std::move(binding));
        binding_ = &result_.bindings.back();
        op_types_ = &result_.types[original.name];

        for (const auto& v : original.inputs) node_flow_names_.insert(v.name);
        for (const auto& v : original.outputs) node_flow_names_.insert(v.name);
        collect_remaining_locals(node.locals, node.body);

        BOperation op;
        op.name = original.name;
        for (const auto& v : original.outputs) {
            op.outputs.push_back(v.name);
            (*op_types_)[v.name] = v.type;
        }
        for (const auto& v : original.inputs) {
            op.params.push_back(v.name);
            op.pre.push_back(b_member(b_ref(v.name), domain_of(*v.type)));
            (*op_types_)[v.name] = v.type;
        }

        std::vector<BSubstPtr> seq;
        // outputs are given their type defaults up front so cellwise updates
        // apply to defined functions and every path leaves them assigned
        for (const auto& v : original.outputs)
            seq.push_back(b_assign_var(v.name, default_bexpr(*v.type)));
        translate_items(node.body, seq);

        BSubstPtr body = b_seq(std::move(seq));
        if (!op_locals_.empty()) {
            auto var = std::make_unique<BSubst>();
            var->kind = BSubst::Kind::Var;
            var->var_names = op_locals_;
            var->var_body = std::move(body);
            body = std::move(var);
        }
        op.body = std::move(body);
        result_.machine.operations.push_back(std::move(op));
    }

    void collect_remaining_locals(const std::vector<VarDecl>& locals,
                                  const std::vector<BodyItemPtr>& items) {
        for (const auto& v : locals) {
            node_flow_names_.insert(v.name);
            op_locals_.push_back(v.name);
            (*op_types_)[v.name] = v.type;
        }
        for (const auto& item : items) {
            if (item->kind == BodyItem::Kind::ActivateIf) {
                collect_remaining_locals(item->activate.then_locals, item->activate.then_items);
                collect_remaining_locals(item->activate.else_locals, item->activate.else_items);
            } else if (item->kind == BodyItem::Kind::StateMachine) {
                for (const auto& s : item->machine.states)
                    collect_remaining_locals(s.locals, s.body);
            }
        }
    }

    void translate_items(const std::vector<BodyItemPtr>& items, std::vector<BSubstPtr>& out) {
        Schedule schedule = build_schedule(items);
        for (const auto& entry : schedule) {
            if (entry.kind == SchedEntry::Kind::FbyShift)
                translate_fby_shift(*entry.item, out);
            else
                translate_item(*entry.item, out);
        }
    }

    void translate_item(const BodyItem& item, std::vector<BSubstPtr>& out) {
        switch (item.kind) {
        case BodyItem::Kind::Equation:
            translate_equation(item.equation, out);
            return;
        case BodyItem::Kind::ActivateIf: {
            const auto& act = item.activate;
            auto sub = std::make_unique<BSubst>();
            sub->kind = BSubst::Kind::If;
            BSubst::IfBranch branch;
            branch.cond = pred_of(*act.condition);
            std::vector<BSubstPtr> then_seq;
            translate_items(act.then_items, then_seq);
            branch.body = b_seq(std::move(then_seq));
            sub->branches.push_back(std::move(branch));
            std::vector<BSubstPtr> else_seq;
            translate_items(act.else_items, else_seq);
            sub->else_sub = b_seq(std::move(else_seq));
            out.push_back(std::move(sub));
            return;
        }
        case BodyItem::Kind::StateMachine:
            translate_state_machine(item.machine, out);
            return;
        }
    }

    // ---- equations -----------------------------------------------------------

    void translate_equation(const Equation& eq, std::vector<BSubstPtr>& out) {
        const Expr& rhs = *eq.rhs;
        if (rhs.kind == Expr::Kind::Fby) {
            translate_fby_read(eq, out);
            return;
        }
        if (rhs.kind == Expr::Kind::HigherOrder) {
            translate_hof(eq, out);
            return;
        }
        if (rhs.kind == Expr::Kind::Call) {
            translate_call(eq, out);
            return;
        }
        out.push_back(assign_expr(eq.lhs[0], rhs));
    }

    /// Assignment of an arbitrary pure expression; conditionals at the top
    /// become IF/CASE substitutions.
    BSubstPtr assign_expr(const std::string& target, const Expr& rhs) {
        if (rhs.kind == Expr::Kind::IfThenElse) {
            auto sub = std::make_unique<BSubst>();
            sub->kind = BSubst::Kind::If;
            BSubst::IfBranch branch;
            branch.cond = pred_of(*rhs.args[0]);
            branch.body = assign_expr(target, *rhs.args[1]);
            sub->branches.push_back(std::move(branch));
            sub->else_sub = assign_expr(target, *rhs.args[2]);
            return sub;
        }
        if (rhs.kind == Expr::Kind::CaseOf) {
            auto sub = std::make_unique<BSubst>();
            sub->kind = BSubst::Kind::Case;
            sub->scrutinee = bexpr(*rhs.scrutinee);
            for (const auto& arm : rhs.case_arms) {
                if (!arm.pattern) {
                    sub->else_sub = assign_expr(target, *arm.value);
                    continue;
                }
                BSubst::CaseArm carm;
                carm.labels.push_back(bexpr(*arm.pattern));
                carm.body = assign_expr(target, *arm.value);
                sub->arms.push_back(std::move(carm));
            }
            return sub;
        }
        return b_assign_var(target, bexpr(rhs));
    }

    // ---- fby -------------------------------------------------------------------

    std::string store_for(int fby_id) {
        for (const auto& fb : binding_->fbys)
            if (fb.fby_id == fby_id)
                return fb.store_var;
        fail("delay buffer requested before synthesis");
    }

    void translate_fby_read(const Equation& eq, std::vector<BSubstPtr>& out) {
        const Expr& fby = *eq.rhs;
        const FbyInfo& info = prog_.info(node_->name).fbys.at((size_t)fby.fby_id);

        // one buffer per instance: a state body reached both by staying and
        // by a strong transition translates in two places
        std::string store;
        for (const auto& fb : binding_->fbys)
            if (fb.fby_id == fby.fby_id)
                store = fb.store_var;
        if (store.empty()) {
            store = fresh_name(fby_total_ == 0 && total_fby_count() == 1
                                   ? "store"
                                   : "store_" + std::to_string(fby_total_));
            ++fby_total_;

            auto buffer_type = std::make_shared<TypeExpr>();
            buffer_type->kind = TypeExpr::Kind::Array;
            buffer_type->elem = info.flow_type;
            buffer_type->size = info.depth;

            auto init = std::make_unique<BExpr>();
            init->kind = BExpr::Kind::MapletSet;
            for (long long i = 0; i < info.depth; ++i)
                init->maplets.emplace_back(b_int(i), value_to_bexpr(info.init));

            add_variable(store, domain_of(*buffer_type), b_assign_var(store, std::move(init)),
                         buffer_type);
            binding_->fbys.push_back(FbyBinding{fby.fby_id, store, info.depth});
        }

        out.push_back(b_assign_var(eq.lhs[0], b_apply(store, b_int(0))));
    }

    void translate_fby_shift(const BodyItem& item, std::vector<BSubstPtr>& out) {
        const Expr& fby = *item.equation.rhs;
        const FbyInfo& info = prog_.info(node_->name).fbys.at((size_t)fby.fby_id);
        std::string store = store_for(fby.fby_id);
        for (long long i = 0; i + 1 < info.depth; ++i) {
            BLValue lv;
            lv.name = store;
            lv.index = b_int(i);
            out.push_back(b_assign(std::move(lv), b_apply(store, b_int(i + 1))));
        }
        BLValue last;
        last.name = store;
        last.index = b_int(info.depth - 1);
        out.push_back(b_assign(std::move(last), bexpr(*fby.fby_input)));
    }

    int total_fby_count() const {
        int n = 0;
        for (const auto& [_, info] : prog_.node_info)
            n += (int)info.fbys.size();
        return n;
    }

    // ---- state machines ----------------------------------------------------------

    void translate_state_machine(const StateMachine& m, std::vector<BSubstPtr>& out) {
        std::string var;
        for (const auto& sm : binding_->machines)
            if (sm.machine_name == m.name)
                var = sm.state_var; // reached through two enclosing branches
        if (var.empty()) {
            std::vector<std::string> members;
            for (const auto& s : m.states)
                members.push_back(s.name);
            result_.machine.sets.push_back(BSet{m.name, members});

            var = state_var_name(m.name);
            auto sm_type = std::make_shared<TypeExpr>();
            sm_type->kind = TypeExpr::Kind::Enum;
            sm_type->name = m.name;
            sm_type->members = members;
            add_variable(var, b_domain_name(m.name),
                         b_assign_var(var, b_ref(m.initial_state()->name)), sm_type);
            binding_->machines.push_back(SmBinding{m.name, var});
        }

        auto sub = std::make_unique<BSubst>();
        sub->kind = BSubst::Kind::Case;
        sub->scrutinee = b_ref(var);
        for (const auto& s : m.states) {
            BSubst::CaseArm arm;
            arm.labels.push_back(b_ref(s.name));
            arm.body = state_arm(m, s, var);
            sub->arms.push_back(std::move(arm));
        }
        out.push_back(std::move(sub));
    }

    std::string state_var_name(const std::string& machine) {
        for (const auto& p : prog_.program.pragmas) {
            if (p.key != "state_var")
                continue;
            std::istringstream is(p.value);
            std::string m, v;
            is >> m >> v;
            if (m == machine) {
                if (v.empty())
                    fail("state_var pragma for '" + machine + "' names no variable");
                taken_names_.insert(v);
                return v;
            }
        }
        std::string lowered;
        for (char c : machine)
            lowered += (char)std::tolower((unsigned char)c);
        return fresh_name(lowered + "_state");
    }

    BSubstPtr state_arm(const StateMachine& m, const StateDecl& s, const std::string& var) {
        std::vector<BSubstPtr> current_body;
        translate_items(s.body, current_body);

        if (s.transitions.empty()) {
            if (current_body.empty())
                return b_skip();
            return b_seq(std::move(current_body));
        }

        auto sub = std::make_unique<BSubst>();
        sub->kind = BSubst::Kind::If;
        for (const auto& t : s.transitions) {
            BSubst::IfBranch branch;
            branch.cond = pred_of(*t.condition);
            std::vector<BSubstPtr> seq;
            seq.push_back(b_assign_var(var, b_ref(t.target)));
            // strong transition: the target state produces this cycle
            translate_items(m.find_state(t.target)->body, seq);
            branch.body = b_seq(std::move(seq));
            sub->branches.push_back(std::move(branch));
        }
        if (!current_body.empty())
            sub->else_sub = b_seq(std::move(current_body));
        return sub;
    }

    // ---- operator calls -------------------------------------------------------------

    using ClosedForms = std::vector<std::pair<std::string, BExprPtr>>;

    /// Symbolic closed forms of a stateless operator's outputs over its
    /// parameter names; empty optional when the body falls outside the
    /// expressible subset (conditional expressions, nested fallback calls).
    std::optional<ClosedForms> inline_function(const NodeDecl& fn) {
        std::map<std::string, BExprPtr> env;
        for (const auto& p : fn.inputs)
            env[p.name] = b_ref(p.name);
        Schedule schedule;
        try {
            schedule = build_schedule(fn.body);
        } catch (const FrontendError&) {
            return std::nullopt;
        }
        for (const auto& entry : schedule) {
            const Equation& eq = entry.item->equation;
            BExprPtr form;
            try {
                form = bexpr_subst(*eq.rhs, env);
            } catch (const TranslateError&) {
                return std::nullopt;
            }
            env[eq.lhs[0]] = std::move(form);
        }
        ClosedForms out;
        for (const auto& o : fn.outputs) {
            auto it = env.find(o.name);
            if (it == env.end())
                return std::nullopt;
            out.emplace_back(o.name, it->second->clone());
        }
        return out;
    }

    /// bexpr() with parameter substitution from `env`.
    BExprPtr bexpr_subst(const Expr& e, const std::map<std::string, BExprPtr>& env) {
        if (e.kind == Expr::Kind::VarRef) {
            auto it = env.find(e.name);
            if (it != env.end())
                return it->second->clone();
        }
        return bexpr_impl(e, &env);
    }

    void translate_call(const Equation& eq, std::vector<BSubstPtr>& out) {
        const NodeDecl& fn = prog_.node(eq.rhs->name);
        auto forms = inline_function(fn);
        if (forms) {
            std::map<std::string, BExprPtr> actuals;
            for (size_t i = 0; i < fn.inputs.size(); ++i)
                actuals[fn.inputs[i].name] = bexpr(*eq.rhs->args[i]);
            auto sub = std::make_unique<BSubst>();
            sub->kind = BSubst::Kind::Assign;
            for (size_t i = 0; i < eq.lhs.size(); ++i) {
                BLValue lv;
                lv.name = eq.lhs[i];
                sub->lvalues.push_back(std::move(lv));
                sub->exprs.push_back(substitute_refs((*forms)[i].second->clone(), actuals));
            }
            out.push_back(std::move(sub));
            return;
        }
        require_aux_operation(fn);
        auto call = std::make_unique<BSubst>();
        call->kind = BSubst::Kind::OpCall;
        call->call_outputs = eq.lhs;
        call->call_op = fn.name;
        for (const auto& a : eq.rhs->args)
            call->call_args.push_back(bexpr(*a));
        out.push_back(std::move(call));
    }

    BExprPtr substitute_refs(BExprPtr e, const std::map<std::string, BExprPtr>& actuals) {
        if (e->kind == BExpr::Kind::Ref) {
            auto it = actuals.find(e->name);
            if (it != actuals.end())
                return it->second->clone();
            return e;
        }
        for (auto& a : e->args)
            a = substitute_refs(std::move(a), actuals);
        for (auto& [k, v] : e->maplets) {
            k = substitute_refs(std::move(k), actuals);
            v = substitute_refs(std::move(v), actuals);
        }
        for (auto& [_, v] : e->fields)
            v = substitute_refs(std::move(v), actuals);
        if (e->bool_pred)
            substitute_refs_pred(*e->bool_pred, actuals);
        return e;
    }

    void substitute_refs_pred(BPred& p, const std::map<std::string, BExprPtr>& actuals) {
        for (auto& sub : p.preds)
            substitute_refs_pred(*sub, actuals);
        auto fix = [&](BExprPtr& e) {
            if (e)
                e = substitute_refs(std::move(e), actuals);
        };
        fix(p.lhs);
        fix(p.rhs);
        fix(p.elem);
        fix(p.lo);
        fix(p.hi);
        if (p.guard)
            substitute_refs_pred(*p.guard, actuals);
        if (p.body)
            substitute_refs_pred(*p.body, actuals);
    }

    /// Operators that cannot be inlined become machine operations invoked
    /// from loop bodies. Classical B does not allow same-machine calls; the
    /// warning flags machines that need restructuring before proof.
    void require_aux_operation(const NodeDecl& fn) {
        if (!aux_ops_emitted_.insert(fn.name).second)
            return;
        result_.warnings.push_back("operator '" + fn.name +
                                   "' is not inlinable; emitted as an operation (same-machine "
                                   "call from a loop body)");
        BOperation op;
        op.name = fn.name;
        for (const auto& o : fn.outputs)
            op.outputs.push_back(o.name);
        for (const auto& p : fn.inputs) {
            op.params.push_back(p.name);
            op.pre.push_back(b_member(b_ref(p.name), domain_of(*p.type)));
        }
        std::vector<BSubstPtr> seq;
        for (const auto& o : fn.outputs)
            seq.push_back(b_assign_var(o.name, default_bexpr(*o.type)));
        Schedule schedule = build_schedule(fn.body);
        for (const auto& entry : schedule)
            seq.push_back(assign_expr(entry.item->equation.lhs[0], *entry.item->equation.rhs));
        op.body = b_seq(std::move(seq));
        result_.machine.operations.push_back(std::move(op));
    }

    // ---- higher-order applications ------------------------------------------------

    void translate_hof(const Equation& eq, std::vector<BSubstPtr>& out);

    /// cond initializer: TRUE/FALSE/flow reference, or bool(P) for compounds.
    BExprPtr bexpr_bool_init(const Expr& e) {
        if (e.kind == Expr::Kind::BoolLit || e.kind == Expr::Kind::VarRef)
            return bexpr(e);
        return bool_of(pred_of(e));
    }

    /// Typing-only loop invariant body: the written cells (or the threaded
    /// accumulators, for pure folds) stay inside their declared domains.
    BPredPtr typing_inv_body(const std::vector<std::string>& value_targets,
                             const std::vector<std::string>& accs, int acc_count, bool indexed,
                             const NodeDecl& op, size_t first_value) {
        BPredPtr body;
        auto add = [&](BPredPtr p) {
            body = body ? b_and(std::move(body), std::move(p)) : std::move(p);
        };
        for (size_t k = 0; k < value_targets.size(); ++k)
            add(b_member(b_apply(value_targets[k], b_ref("i")),
                         domain_of(*op.outputs[first_value + k].type)));
        if (value_targets.empty()) {
            size_t base = indexed ? 1 : 0;
            for (int k = 0; k < acc_count; ++k)
                add(b_member(b_ref(accs[(size_t)k]),
                             domain_of(*op.inputs[base + (size_t)k].type)));
        }
        return body;
    }

    // ---- expressions ------------------------------------------------------------

    BExprPtr bexpr(const Expr& e) { return bexpr_impl(e, nullptr); }

    BExprPtr bexpr_impl(const Expr& e, const std::map<std::string, BExprPtr>* env) {
        auto rec = [&](const Expr& x) { return bexpr_impl(x, env); };
        switch (e.kind) {
        case Expr::Kind::IntLit:
            return b_int(e.int_val);
        case Expr::Kind::BoolLit:
            return b_bool(e.bool_val);
        case Expr::Kind::VarRef: {
            if (env) {
                auto it = env->find(e.name);
                if (it != env->end())
                    return it->second->clone();
            }
            return b_ref(e.name);
        }
        case Expr::Kind::EnumRef:
            return b_ref(e.name);
        case Expr::Kind::Unary: {
            if (e.unary_op == UnaryOp::Not)
                return bool_of(pred_of_impl(e, env));
            auto neg = std::make_unique<BExpr>();
            neg->kind = BExpr::Kind::Neg;
            neg->args.push_back(rec(*e.args[0]));
            return neg;
        }
        case Expr::Kind::Binary: {
            switch (e.binary_op) {
            case BinaryOp::Add: return b_binary(BBinOp::Add, rec(*e.args[0]), rec(*e.args[1]));
            case BinaryOp::Sub: return b_binary(BBinOp::Sub, rec(*e.args[0]), rec(*e.args[1]));
            case BinaryOp::Mul: return b_binary(BBinOp::Mul, rec(*e.args[0]), rec(*e.args[1]));
            case BinaryOp::Div: return b_binary(BBinOp::Div, rec(*e.args[0]), rec(*e.args[1]));
            case BinaryOp::Mod: return b_binary(BBinOp::Mod, rec(*e.args[0]), rec(*e.args[1]));
            default:
                // comparison or connective in value position
                return bool_of(pred_of_impl(e, env));
            }
        }
        case Expr::Kind::StructMake: {
            auto r = std::make_unique<BExpr>();
            r->kind = BExpr::Kind::Record;
            for (size_t i = 0; i < e.args.size(); ++i)
                r->fields.emplace_back(e.type->fields[i].first, rec(*e.args[i]));
            return r;
        }
        case Expr::Kind::FieldAccess: {
            auto f = std::make_unique<BExpr>();
            f->kind = BExpr::Kind::Field;
            f->name = e.name;
            f->args.push_back(rec(*e.args[0]));
            return f;
        }
        case Expr::Kind::ArrayIndex: {
            BExprPtr arr = rec(*e.args[0]);
            if (arr->kind != BExpr::Kind::Ref && arr->kind != BExpr::Kind::Field)
                fail("indexing of computed arrays is outside the translated subset");
            if (arr->kind == BExpr::Kind::Ref)
                return b_apply(arr->name, rec(*e.args[1]));
            // (r'f)(i): expression-function application
            auto app = std::make_unique<BExpr>();
            app->kind = BExpr::Kind::Apply;
            app->args.push_back(rec(*e.args[1]));
            app->args.push_back(std::move(arr));
            return app;
        }
        case Expr::Kind::Call: {
            const NodeDecl& fn = prog_.node(e.name);
            auto forms = inline_function(fn);
            if (!forms || forms->size() != 1)
                fail("operator '" + e.name + "' cannot be inlined inside an expression");
            std::map<std::string, BExprPtr> actuals;
            for (size_t i = 0; i < fn.inputs.size(); ++i)
                actuals[fn.inputs[i].name] = rec(*e.args[i]);
            return substitute_refs(std::move((*forms)[0].second), actuals);
        }
        case Expr::Kind::IfThenElse:
        case Expr::Kind::CaseOf:
            fail("conditional expressions are translatable only as a whole equation");
        case Expr::Kind::Fby:
        case Expr::Kind::HigherOrder:
            break;
        }
        fail("expression outside the translatable subset");
    }

    static BExprPtr bool_of(BPredPtr p) { return b_bool_of(std::move(p)); }

    BPredPtr pred_of(const Expr& e) { return pred_of_impl(e, nullptr); }

    /// Boolean expression to predicate: comparisons map structurally, boolean
    /// connectives recurse, and any other boolean-typed expression e becomes
    /// `e = TRUE`.
    BPredPtr pred_of_impl(const Expr& e, const std::map<std::string, BExprPtr>* env) {
        if (e.kind == Expr::Kind::Binary) {
            switch (e.binary_op) {
            case BinaryOp::Eq:
                return b_compare(BCmpOp::Eq, bexpr_impl(*e.args[0], env),
                                 bexpr_impl(*e.args[1], env));
            case BinaryOp::Ne:
                return b_compare(BCmpOp::Ne, bexpr_impl(*e.args[0], env),
                                 bexpr_impl(*e.args[1], env));
            case BinaryOp::Lt:
                return b_compare(BCmpOp::Lt, bexpr_impl(*e.args[0], env),
                                 bexpr_impl(*e.args[1], env));
            case BinaryOp::Le:
                return b_compare(BCmpOp::Le, bexpr_impl(*e.args[0], env),
                                 bexpr_impl(*e.args[1], env));
            case BinaryOp::Gt:
                return b_compare(BCmpOp::Gt, bexpr_impl(*e.args[0], env),
                                 bexpr_impl(*e.args[1], env));
            case BinaryOp::Ge:
                return b_compare(BCmpOp::Ge, bexpr_impl(*e.args[0], env),
                                 bexpr_impl(*e.args[1], env));
            case BinaryOp::And:
                return b_and(pred_of_impl(*e.args[0], env), pred_of_impl(*e.args[1], env));
            case BinaryOp::Or: {
                auto p = std::make_unique<BPred>();
                p->kind = BPred::Kind::Or;
                p->preds.push_back(pred_of_impl(*e.args[0], env));
                p->preds.push_back(pred_of_impl(*e.args[1], env));
                return p;
            }
            default:
                break;
            }
        }
        if (e.kind == Expr::Kind::Unary && e.unary_op == UnaryOp::Not)
            return b_not(pred_of_impl(*e.args[0], env));
        if (e.kind == Expr::Kind::BoolLit)
            return b_compare(BCmpOp::Eq, b_bool(e.bool_val), b_bool(true));
        return b_compare(BCmpOp::Eq, bexpr_impl(e, env), b_bool(true));
    }

};

// ---------------------------------------------------------------------------
// WHILE synthesis for the twelve iterator variants
// ---------------------------------------------------------------------------

void Translator::translate_hof(const Equation& eq, std::vector<BSubstPtr>& out) {
    const Expr& app = *eq.rhs;
    const NodeDecl& op = prog_.node(app.hof_op);
    const bool indexed = hof_is_indexed(app.hof_variant);
    const bool whiled = hof_is_while(app.hof_variant);
    const int acc_count = app.hof_acc_count;
    const bool binds_cond =
        app.hof_variant == HofVariant::Mapfoldw || app.hof_variant == HofVariant::Mapfoldwi;
    const size_t first_value = (whiled ? 1 : 0) + (size_t)acc_count;
    const size_t m = op.outputs.size() - first_value;

    // split the left-hand side into control, accumulator and value targets
    size_t li = 0;
    std::string idx_target, cond_target;
    if (app.hof_binds_control) {
        idx_target = eq.lhs[li++];
        if (binds_cond)
            cond_target = eq.lhs[li++];
    }
    std::vector<std::string> acc_targets, value_targets;
    for (int k = 0; k < acc_count; ++k)
        acc_targets.push_back(eq.lhs[li++]);
    for (size_t k = 0; k < m; ++k)
        value_targets.push_back(eq.lhs[li++]);

    BExprPtr size_expr = app.hof_size_name.empty() ? b_int(app.hof_size)
                                                   : b_ref(app.hof_size_name);

    // synthesized loop locals; names must not capture any flow of the node
    auto loop_local = [&](const std::string& base) {
        std::string name = base;
        for (int k = 0; node_flow_names_.count(name) || taken_names_.count(name); ++k)
            name = base + "_" + std::to_string(k);
        return name;
    };
    std::string idx = loop_local("idx");
    std::string cond = whiled ? loop_local("cond") : "";
    std::vector<std::string> accs;
    for (int k = 0; k < acc_count; ++k)
        accs.push_back(loop_local(acc_count == 1 ? "acc" : "acc" + std::to_string(k + 1)));

    std::vector<BSubstPtr> block;

    // idx[, accs][, cond] := 0[, seeds][, initcond]
    {
        auto init = std::make_unique<BSubst>();
        init->kind = BSubst::Kind::Assign;
        BLValue lv;
        lv.name = idx;
        init->lvalues.push_back(std::move(lv));
        init->exprs.push_back(b_int(0));
        for (int k = 0; k < acc_count; ++k) {
            BLValue alv;
            alv.name = accs[(size_t)k];
            init->lvalues.push_back(std::move(alv));
            init->exprs.push_back(bexpr(*app.hof_acc_inits[(size_t)k]));
        }
        if (whiled) {
            BLValue clv;
            clv.name = cond;
            init->lvalues.push_back(std::move(clv));
            init->exprs.push_back(bexpr_bool_init(*app.hof_init_cond));
        }
        block.push_back(std::move(init));
    }

    // local array targets need a defined function before cellwise updates
    for (size_t k = 0; k < m; ++k) {
        const std::string& target = value_targets[k];
        bool is_output = false;
        for (const auto& o : node_->outputs)
            is_output = is_output || o.name == target;
        if (!is_output) {
            const TypePtr& t = op_types_->at(target);
            block.push_back(b_assign_var(target, default_bexpr(*t)));
        }
    }

    // closed forms of the operator, or the operation-call fallback
    auto forms = inline_function(op);

    BPredPtr while_cond = b_compare(BCmpOp::Lt, b_ref(idx), size_expr->clone());
    if (whiled)
        while_cond = b_and(std::move(while_cond),
                           b_compare(BCmpOp::Eq, b_ref(cond), b_bool(true)));

    std::vector<BSubstPtr> body;
    std::map<std::string, BExprPtr> actuals;
    {
        size_t pi = 0;
        if (indexed)
            actuals[op.inputs[pi++].name] = b_ref(idx);
        for (int k = 0; k < acc_count; ++k)
            actuals[op.inputs[pi++].name] = b_ref(accs[(size_t)k]);
        for (const auto& arr : app.hof_arrays) {
            BExprPtr a = bexpr(*arr);
            if (a->kind != BExpr::Kind::Ref)
                fail("iterator arrays must be named flows");
            actuals[op.inputs[pi++].name] = b_apply(a->name, b_ref(idx));
        }
    }

    if (forms) {
        // one simultaneous assignment in recurrence order:
        // [cond,] [accs,] v_k(idx) := forms
        auto line = std::make_unique<BSubst>();
        line->kind = BSubst::Kind::Assign;
        size_t oi = 0;
        if (whiled) {
            BLValue lv;
            lv.name = cond;
            line->lvalues.push_back(std::move(lv));
            line->exprs.push_back(substitute_refs((*forms)[oi++].second->clone(), actuals));
        }
        for (int k = 0; k < acc_count; ++k) {
            BLValue lv;
            lv.name = accs[(size_t)k];
            line->lvalues.push_back(std::move(lv));
            line->exprs.push_back(substitute_refs((*forms)[oi++].second->clone(), actuals));
        }
        for (size_t k = 0; k < m; ++k) {
            BLValue lv;
            lv.name = value_targets[k];
            lv.index = b_ref(idx);
            line->lvalues.push_back(std::move(lv));
            line->exprs.push_back(substitute_refs((*forms)[oi++].second->clone(), actuals));
        }
        body.push_back(std::move(line));
    } else {
        require_aux_operation(op);
        // temporaries receive the cell values; cells are set right after
        std::vector<std::string> temps;
        for (size_t k = 0; k < m; ++k)
            temps.push_back(loop_local("val" + std::to_string(k + 1)));
        auto call = std::make_unique<BSubst>();
        call->kind = BSubst::Kind::OpCall;
        if (whiled)
            call->call_outputs.push_back(cond);
        for (const auto& a : accs)
            call->call_outputs.push_back(a);
        for (const auto& t : temps)
            call->call_outputs.push_back(t);
        call->call_op = op.name;
        {
            size_t pi = 0;
            if (indexed)
                call->call_args.push_back(b_ref(idx)), ++pi;
            for (int k = 0; k < acc_count; ++k)
                call->call_args.push_back(b_ref(accs[(size_t)k])), ++pi;
            for (const auto& arr : app.hof_arrays) {
                BExprPtr a = bexpr(*arr);
                call->call_args.push_back(b_apply(a->name, b_ref(idx)));
            }
        }
        body.push_back(std::move(call));
        for (size_t k = 0; k < m; ++k) {
            BLValue lv;
            lv.name = value_targets[k];
            lv.index = b_ref(idx);
            body.push_back(b_assign(std::move(lv), b_ref(temps[k])));
        }
        // the temporaries live in the VAR block alongside idx
        for (const auto& t : temps)
            accs.push_back(t); // reuse the declaration list
    }

    body.push_back(b_assign_var(idx, b_binary(BBinOp::Add, b_ref(idx), b_int(1))));

    // INVARIANT: the operator's defining relation on each processed cell
    // when it inlines to one value expression; otherwise the typing of
    // whatever the loop writes
    BPredPtr inv_body;
    if (forms && m == 1 && acc_count == 0) {
        std::map<std::string, BExprPtr> spec_args;
        size_t pi = 0;
        if (indexed)
            spec_args[op.inputs[pi++].name] = b_ref("i");
        for (const auto& arr : app.hof_arrays) {
            BExprPtr a = bexpr(*arr);
            spec_args[op.inputs[pi++].name] = b_apply(a->name, b_ref("i"));
        }
        size_t oi = whiled ? 1 : 0;
        inv_body = b_compare(BCmpOp::Eq, b_apply(value_targets[0], b_ref("i")),
                             substitute_refs((*forms)[oi].second->clone(), spec_args));
    } else {
        inv_body = typing_inv_body(value_targets, accs, acc_count, indexed, op, first_value);
    }
    auto forall = std::make_unique<BPred>();
    forall->kind = BPred::Kind::Forall;
    forall->var = "i";
    forall->lo = b_int(0);
    forall->hi = b_binary(BBinOp::Sub, b_ref(idx), b_int(1));
    if (whiled)
        forall->guard = b_compare(BCmpOp::Eq, b_ref(cond), b_bool(true));
    forall->body = std::move(inv_body);

    auto loop = std::make_unique<BSubst>();
    loop->kind = BSubst::Kind::While;
    loop->while_cond = std::move(while_cond);
    loop->while_body = b_seq(std::move(body));
    loop->invariant = std::move(forall);
    loop->variant = b_binary(BBinOp::Sub, size_expr->clone(), b_ref(idx));
    block.push_back(std::move(loop));

    // bound control and accumulator results
    if (!idx_target.empty())
        block.push_back(b_assign_var(idx_target, b_ref(idx)));
    if (!cond_target.empty())
        block.push_back(b_assign_var(cond_target, b_ref(cond)));
    for (int k = 0; k < acc_count; ++k)
        block.push_back(b_assign_var(acc_targets[(size_t)k], b_ref(accs[(size_t)k])));

    // early-stopped cells take the declared defaults; idx continues to size
    if (whiled && m > 0) {
        auto fill = std::make_unique<BSubst>();
        fill->kind = BSubst::Kind::While;
        fill->while_cond = b_compare(BCmpOp::Lt, b_ref(idx), size_expr->clone());
        std::vector<BSubstPtr> fill_body;
        auto line = std::make_unique<BSubst>();
        line->kind = BSubst::Kind::Assign;
        for (size_t k = 0; k < m; ++k) {
            BLValue lv;
            lv.name = value_targets[k];
            lv.index = b_ref(idx);
            line->lvalues.push_back(std::move(lv));
            line->exprs.push_back(bexpr(*app.hof_defaults[k]));
        }
        fill_body.push_back(std::move(line));
        fill_body.push_back(b_assign_var(idx, b_binary(BBinOp::Add, b_ref(idx), b_int(1))));
        fill->while_body = b_seq(std::move(fill_body));
        auto fill_inv = std::make_unique<BPred>();
        fill_inv->kind = BPred::Kind::Forall;
        fill_inv->var = "i";
        fill_inv->lo = b_int(0);
        fill_inv->hi = b_binary(BBinOp::Sub, b_ref(idx), b_int(1));
        fill_inv->body = typing_inv_body(value_targets, {}, 0, indexed, op, first_value);
        fill->invariant = std::move(fill_inv);
        fill->variant = b_binary(BBinOp::Sub, size_expr->clone(), b_ref(idx));
        block.push_back(std::move(fill));
    }

    auto var = std::make_unique<BSubst>();
    var->kind = BSubst::Kind::Var;
    var->var_names.push_back(idx);
    for (const auto& a : accs)
        var->var_names.push_back(a);
    if (whiled)
        var->var_names.push_back(cond);
    var->var_body = b_seq(std::move(block));
    out.push_back(std::move(var));
}

} // namespace

TranslationResult translate(const TypedProgram& program, const TranslateOptions& options) {
    return Translator(program, options).run();
}

const NodeBinding& TranslationResult::binding_for(const std::string& node_name) const {
    for (const auto& b : bindings)
        if (b.node_name == node_name)
            return b;
    throw EvalError(EvalErrorKind::Internal, "no binding for node " + node_name);
}

} // namespace scb
