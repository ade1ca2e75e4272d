#include "scb/b_eval.hpp"

#include "scb/b_emit.hpp"

#include <algorithm>
#include <set>

namespace scb {

namespace {

struct NonDisjointError {
    std::string name;
};

/// Constant environment derived from SETS and PROPERTIES.
struct MachineContext {
    const BMachine& machine;
    std::map<std::string, Value> consts;                 // value properties
    std::map<std::string, std::pair<long long, long long>> intervals; // interval properties
    std::map<std::string, std::string> member_set;       // enum member -> set
    std::map<std::string, const BDomain*> struct_defs;

    explicit MachineContext(const BMachine& m) : machine(m) {
        for (const auto& set : m.sets)
            for (const auto& member : set.members)
                member_set[member] = set.name;
        for (const auto& p : m.properties) {
            if (p.value && p.value->kind == BExpr::Kind::IntLit) {
                long long v = p.value->int_val;
                consts.emplace(p.name, Value::make_int(v, v, v));
            } else if (p.value && p.value->kind == BExpr::Kind::BoolLit) {
                consts.emplace(p.name, Value::make_bool(p.value->bool_val));
            } else if (p.value && p.value->kind == BExpr::Kind::Ref) {
                auto it = member_set.find(p.value->name);
                if (it != member_set.end())
                    consts.emplace(p.name, Value::make_enum(it->second, p.value->name));
            } else if (p.domain && p.domain->kind == BDomain::Kind::Interval) {
                // interval bounds in properties are literal by construction
                if (p.domain->lo->kind == BExpr::Kind::IntLit &&
                    p.domain->hi->kind == BExpr::Kind::IntLit)
                    intervals.emplace(p.name, std::make_pair(p.domain->lo->int_val,
                                                             p.domain->hi->int_val));
            } else if (p.domain && p.domain->kind == BDomain::Kind::StructSet) {
                struct_defs.emplace(p.name, p.domain.get());
            }
        }
    }
};

class BExec {
public:
    BExec(const MachineContext& ctx, const InvokeOptions& options, std::string op_name)
        : ctx_(ctx), options_(options), op_name_(std::move(op_name)) {}

    std::map<std::string, Value> machine_vars;
    std::vector<std::map<std::string, std::optional<Value>>> scopes;
    std::vector<BDiag>* diags = nullptr;

    // ---- environment -------------------------------------------------------

    Value read(const std::string& name) const {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) {
                if (!found->second)
                    throw EvalError(EvalErrorKind::Internal,
                                    "read of unassigned identifier '" + name + "'");
                return *found->second;
            }
        }
        auto mv = machine_vars.find(name);
        if (mv != machine_vars.end())
            return mv->second;
        auto c = ctx_.consts.find(name);
        if (c != ctx_.consts.end())
            return c->second;
        auto mem = ctx_.member_set.find(name);
        if (mem != ctx_.member_set.end())
            return Value::make_enum(mem->second, name);
        throw EvalError(EvalErrorKind::Internal, "unknown identifier '" + name + "'");
    }

    const TypePtr* declared_type(const std::string& name) const {
        if (!options_.types)
            return nullptr;
        auto op_scope = options_.types->find(op_name_);
        if (op_scope != options_.types->end()) {
            auto it = op_scope->second.find(name);
            if (it != op_scope->second.end())
                return &it->second;
        }
        auto machine_scope = options_.types->find("");
        if (machine_scope != options_.types->end()) {
            auto it = machine_scope->second.find(name);
            if (it != machine_scope->second.end())
                return &it->second;
        }
        return nullptr;
    }

    void write(const BLValue& lv, Value v) {
        if (lv.index) {
            long long i = eval(*lv.index).as_int();
            Value current = read(lv.name);
            if (current.kind() != Value::Kind::Array)
                throw EvalError(EvalErrorKind::Internal,
                                "cell update of non-function '" + lv.name + "'");
            if (i < 0 || i >= (long long)current.cells().size())
                throw EvalError(EvalErrorKind::Range,
                                "cell index " + std::to_string(i) + " outside 0.." +
                                    std::to_string(current.cells().size() - 1));
            if (const TypePtr* t = declared_type(lv.name)) {
                if ((*t)->kind == TypeExpr::Kind::Array)
                    v = coerce_value(std::move(v), *(*t)->elem);
            }
            current.cells()[(size_t)i] = std::move(v);
            store(lv.name, std::move(current), /*coerced=*/true);
            return;
        }
        if (!lv.field.empty()) {
            Value current = read(lv.name);
            if (const TypePtr* t = declared_type(lv.name)) {
                if ((*t)->kind == TypeExpr::Kind::Struct)
                    for (const auto& [fname, ftype] : (*t)->fields)
                        if (fname == lv.field)
                            v = coerce_value(std::move(v), *ftype);
            }
            current.field(lv.field) = std::move(v);
            store(lv.name, std::move(current), /*coerced=*/true);
            return;
        }
        store(lv.name, std::move(v), /*coerced=*/false);
    }

    void store(const std::string& name, Value v, bool coerced) {
        if (!coerced) {
            if (const TypePtr* t = declared_type(name))
                v = coerce_value(std::move(v), **t);
        }
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) {
                found->second = std::move(v);
                return;
            }
        }
        auto mv = machine_vars.find(name);
        if (mv != machine_vars.end()) {
            mv->second = std::move(v);
            return;
        }
        throw EvalError(EvalErrorKind::Internal, "write to undeclared identifier '" + name + "'");
    }

    // ---- expressions ---------------------------------------------------------

    Value eval(const BExpr& e) const {
        switch (e.kind) {
        case BExpr::Kind::IntLit:
            return Value::make_int(e.int_val, e.int_val, e.int_val);
        case BExpr::Kind::BoolLit:
            return Value::make_bool(e.bool_val);
        case BExpr::Kind::Ref:
            return read(e.name);
        case BExpr::Kind::Binary: {
            long long a = eval(*e.args[0]).as_int();
            long long b = eval(*e.args[1]).as_int();
            switch (e.op) {
            case BBinOp::Add: return Value::make_int(checked_add(a, b), 0, 0);
            case BBinOp::Sub: return Value::make_int(checked_sub(a, b), 0, 0);
            case BBinOp::Mul: return Value::make_int(checked_mul(a, b), 0, 0);
            case BBinOp::Div: return Value::make_int(checked_div(a, b), 0, 0);
            case BBinOp::Mod: return Value::make_int(checked_mod(a, b), 0, 0);
            }
            break;
        }
        case BExpr::Kind::Neg:
            return Value::make_int(checked_sub(0, eval(*e.args[0]).as_int()), 0, 0);
        case BExpr::Kind::Apply: {
            Value fn = e.args.size() > 1 ? eval(*e.args[1]) : read(e.name);
            long long i = eval(*e.args[0]).as_int();
            if (fn.kind() != Value::Kind::Array)
                throw EvalError(EvalErrorKind::Internal, "application of a non-function value");
            if (i < 0 || i >= (long long)fn.cells().size())
                throw EvalError(EvalErrorKind::Range,
                                "application outside the function domain: " + std::to_string(i));
            return fn.cells()[(size_t)i];
        }
        case BExpr::Kind::Interval:
            throw EvalError(EvalErrorKind::Internal, "interval used as a value");
        case BExpr::Kind::MapletSet: {
            std::vector<Value> cells;
            for (size_t i = 0; i < e.maplets.size(); ++i) {
                long long key = eval(*e.maplets[i].first).as_int();
                if (key != (long long)i)
                    throw EvalError(EvalErrorKind::Internal,
                                    "function literal domain must be 0..n-1");
                cells.push_back(eval(*e.maplets[i].second));
            }
            return Value::make_array(std::move(cells));
        }
        case BExpr::Kind::ConstFun: {
            long long lo = eval(*e.args[0]).as_int();
            long long hi = eval(*e.args[1]).as_int();
            if (lo != 0)
                throw EvalError(EvalErrorKind::Internal, "function domains start at 0");
            Value v = eval(*e.args[2]);
            std::vector<Value> cells((size_t)(hi - lo + 1), v);
            return Value::make_array(std::move(cells));
        }
        case BExpr::Kind::Record: {
            std::vector<std::pair<std::string, Value>> fields;
            for (const auto& [f, fe] : e.fields)
                fields.emplace_back(f, eval(*fe));
            return Value::make_record(std::move(fields));
        }
        case BExpr::Kind::Field:
            return eval(*e.args[0]).field(e.name);
        case BExpr::Kind::BoolOf:
            return Value::make_bool(truth(*e.bool_pred));
        }
        throw EvalError(EvalErrorKind::Internal, "unevaluable expression");
    }

    // ---- predicates -------------------------------------------------------------

    bool truth(const BPred& p) const {
        switch (p.kind) {
        case BPred::Kind::And:
            // strict: both sides evaluate, keeping faults aligned between
            // the two executable semantics
            {
                bool a = truth(*p.preds[0]);
                bool b = truth(*p.preds[1]);
                return a && b;
            }
        case BPred::Kind::Or: {
            bool a = truth(*p.preds[0]);
            bool b = truth(*p.preds[1]);
            return a || b;
        }
        case BPred::Kind::Implies: {
            bool a = truth(*p.preds[0]);
            bool b = truth(*p.preds[1]);
            return !a || b;
        }
        case BPred::Kind::Not:
            return !truth(*p.preds[0]);
        case BPred::Kind::Compare: {
            Value a = eval(*p.lhs);
            Value b = eval(*p.rhs);
            switch (p.cmp) {
            case BCmpOp::Eq: return a == b;
            case BCmpOp::Ne: return !(a == b);
            case BCmpOp::Lt: return a.as_int() < b.as_int();
            case BCmpOp::Le: return a.as_int() <= b.as_int();
            case BCmpOp::Gt: return a.as_int() > b.as_int();
            case BCmpOp::Ge: return a.as_int() >= b.as_int();
            }
            break;
        }
        case BPred::Kind::Member:
            return member(eval(*p.elem), *p.domain);
        case BPred::Kind::Forall: {
            long long lo = eval(*p.lo).as_int();
            long long hi = eval(*p.hi).as_int();
            auto* self = const_cast<BExec*>(this);
            self->scopes.push_back({});
            bool ok = true;
            for (long long i = lo; i <= hi && ok; ++i) {
                self->scopes.back()[p.var] = Value::make_int(i, lo, hi);
                bool applies = !p.guard || truth(*p.guard);
                if (applies && !truth(*p.body))
                    ok = false;
            }
            self->scopes.pop_back();
            return ok;
        }
        }
        throw EvalError(EvalErrorKind::Internal, "unevaluable predicate");
    }

    bool member(const Value& v, const BDomain& d) const {
        switch (d.kind) {
        case BDomain::Kind::Name: {
            if (d.name == "BOOL")
                return v.kind() == Value::Kind::Bool;
            auto iv = ctx_.intervals.find(d.name);
            if (iv != ctx_.intervals.end())
                return v.kind() == Value::Kind::Int && v.as_int() >= iv->second.first &&
                       v.as_int() <= iv->second.second;
            auto sd = ctx_.struct_defs.find(d.name);
            if (sd != ctx_.struct_defs.end())
                return record_member(v, *sd->second);
            for (const auto& set : ctx_.machine.sets)
                if (set.name == d.name)
                    return v.kind() == Value::Kind::Enum &&
                           std::find(set.members.begin(), set.members.end(),
                                     v.enum_member()) != set.members.end();
            throw EvalError(EvalErrorKind::Internal, "unknown domain '" + d.name + "'");
        }
        case BDomain::Kind::Interval: {
            if (v.kind() != Value::Kind::Int)
                return false;
            return v.as_int() >= eval(*d.lo).as_int() && v.as_int() <= eval(*d.hi).as_int();
        }
        case BDomain::Kind::TotalFun: {
            if (v.kind() != Value::Kind::Array || d.from->kind != BDomain::Kind::Interval)
                return false;
            long long lo = eval(*d.from->lo).as_int();
            long long hi = eval(*d.from->hi).as_int();
            if (lo != 0 || (long long)v.cells().size() != hi - lo + 1)
                return false;
            for (const auto& cell : v.cells())
                if (!member(cell, *d.to))
                    return false;
            return true;
        }
        case BDomain::Kind::StructSet:
            return record_member(v, d);
        }
        return false;
    }

    bool record_member(const Value& v, const BDomain& d) const {
        if (v.kind() != Value::Kind::Record || v.fields().size() != d.fields.size())
            return false;
        for (size_t i = 0; i < d.fields.size(); ++i) {
            if (v.fields()[i].first != d.fields[i].first)
                return false;
            if (!member(v.fields()[i].second, *d.fields[i].second))
                return false;
        }
        return true;
    }

    // ---- substitutions -------------------------------------------------------------

    void exec(const BSubst& s) {
        switch (s.kind) {
        case BSubst::Kind::Assign: {
            std::vector<Value> values;
            values.reserve(s.exprs.size());
            for (const auto& e : s.exprs)
                values.push_back(eval(*e));
            for (size_t i = 0; i < s.lvalues.size(); ++i)
                write(s.lvalues[i], std::move(values[i]));
            return;
        }
        case BSubst::Kind::If: {
            for (const auto& br : s.branches) {
                if (truth(*br.cond)) {
                    exec(*br.body);
                    return;
                }
            }
            if (s.else_sub)
                exec(*s.else_sub);
            return;
        }
        case BSubst::Kind::Case: {
            Value scr = eval(*s.scrutinee);
            for (const auto& arm : s.arms) {
                for (const auto& label : arm.labels) {
                    if (eval(*label) == scr) {
                        exec(*arm.body);
                        return;
                    }
                }
            }
            if (s.else_sub)
                exec(*s.else_sub);
            return;
        }
        case BSubst::Kind::While:
            exec_while(s);
            return;
        case BSubst::Kind::Var: {
            scopes.push_back({});
            for (const auto& n : s.var_names)
                scopes.back()[n] = std::nullopt;
            exec(*s.var_body);
            scopes.pop_back();
            return;
        }
        case BSubst::Kind::Seq:
            for (const auto& sub : s.subs)
                exec(*sub);
            return;
        case BSubst::Kind::Parallel:
            exec_parallel(s);
            return;
        case BSubst::Kind::Skip:
            return;
        case BSubst::Kind::OpCall:
            exec_opcall(s);
            return;
        }
    }

    void exec_while(const BSubst& s) {
        int iteration = 0;
        auto assert_invariant = [&] {
            if (s.invariant && !truth(*s.invariant) && diags)
                diags->push_back(BDiag{BDiagKind::InvariantViolation,
                                       op_name_ + " WHILE iteration " + std::to_string(iteration),
                                       render_pred(*s.invariant)});
        };
        assert_invariant();
        long long previous_variant = 0;
        bool have_previous = false;
        if (s.variant) {
            previous_variant = eval(*s.variant).as_int();
            have_previous = true;
            if (previous_variant < 0 && diags) {
                diags->push_back(BDiag{BDiagKind::VariantViolation,
                                       op_name_ + " WHILE entry", "variant is negative"});
                return;
            }
        }
        while (truth(*s.while_cond)) {
            exec(*s.while_body);
            ++iteration;
            assert_invariant();
            if (have_previous) {
                long long now = eval(*s.variant).as_int();
                if (now >= previous_variant || now < 0) {
                    if (diags)
                        diags->push_back(
                            BDiag{BDiagKind::VariantViolation,
                                  op_name_ + " WHILE iteration " + std::to_string(iteration),
                                  "variant did not decrease within the naturals"});
                    return; // guards against a loop that cannot terminate
                }
                previous_variant = now;
            }
        }
    }

    void exec_parallel(const BSubst& s) {
        // evaluate every branch against the entry state, then merge writes
        auto entry_vars = machine_vars;
        auto entry_scopes = scopes;
        std::map<std::string, Value> merged_vars;
        std::vector<std::map<std::string, std::optional<Value>>> merged_scopes = entry_scopes;
        std::set<std::string> written;
        for (const auto& branch : s.subs) {
            machine_vars = entry_vars;
            scopes = entry_scopes;
            exec(*branch);
            for (const auto& [name, value] : machine_vars) {
                auto before = entry_vars.find(name);
                if (before == entry_vars.end() || !(before->second == value)) {
                    if (!written.insert(name).second)
                        throw NonDisjointError{name};
                    merged_vars[name] = value;
                }
            }
            for (size_t level = 0; level < scopes.size(); ++level) {
                for (const auto& [name, value] : scopes[level]) {
                    const auto& before = entry_scopes[level].find(name)->second;
                    bool changed = value.has_value() != before.has_value() ||
                                   (value && !(*value == *before));
                    if (changed) {
                        if (!written.insert(name).second)
                            throw NonDisjointError{name};
                        merged_scopes[level][name] = value;
                    }
                }
            }
        }
        machine_vars = entry_vars;
        scopes = std::move(merged_scopes);
        for (auto& [name, value] : merged_vars)
            machine_vars[name] = std::move(value);
    }

    void exec_opcall(const BSubst& s) {
        const BOperation* callee = ctx_.machine.find_operation(s.call_op);
        if (!callee)
            throw EvalError(EvalErrorKind::Internal, "call to unknown operation " + s.call_op);
        std::vector<Value> args;
        for (const auto& a : s.call_args)
            args.push_back(eval(*a));
        // internal call: parameters bind mathematically, no PRE enforcement
        std::map<std::string, std::optional<Value>> frame;
        for (size_t i = 0; i < callee->params.size(); ++i)
            frame[callee->params[i]] = args.at(i);
        for (const auto& o : callee->outputs)
            frame[o] = std::nullopt;
        auto saved_scopes = std::move(scopes);
        auto saved_op = op_name_;
        scopes.clear();
        scopes.push_back(std::move(frame));
        op_name_ = callee->name;
        exec(*callee->body);
        std::vector<Value> results;
        for (const auto& o : callee->outputs) {
            auto& slot = scopes.back()[o];
            if (!slot)
                throw EvalError(EvalErrorKind::Internal,
                                "operation '" + callee->name + "' left output unassigned");
            results.push_back(std::move(*slot));
        }
        scopes = std::move(saved_scopes);
        op_name_ = saved_op;
        for (size_t i = 0; i < s.call_outputs.size(); ++i) {
            BLValue lv;
            lv.name = s.call_outputs[i];
            write(lv, std::move(results.at(i)));
        }
    }

private:
    const MachineContext& ctx_;
    const InvokeOptions& options_;
    std::string op_name_;
};

int first_failing_conjunct(const MachineContext& ctx, BExec& exec) {
    for (size_t i = 0; i < ctx.machine.invariant.size(); ++i)
        if (!exec.truth(*ctx.machine.invariant[i]))
            return (int)i;
    return -1;
}

} // namespace

int InvokeResult::loop_diagnostics() const {
    int n = 0;
    for (const auto& d : diagnostics)
        n += d.kind == BDiagKind::InvariantViolation || d.kind == BDiagKind::VariantViolation;
    return n;
}

BState init_machine(const BMachine& machine, const TypeTable* types, bool check) {
    MachineContext ctx(machine);
    InvokeOptions options;
    options.types = types;
    BExec exec(ctx, options, "");
    // placeholders so initialisation assignments find their targets
    for (const auto& var : machine.variables)
        exec.machine_vars.emplace(var, Value());
    if (machine.initialisation)
        exec.exec(*machine.initialisation);
    if (check) {
        int failing = first_failing_conjunct(ctx, exec);
        if (failing >= 0)
            throw EvalError(EvalErrorKind::Invariant,
                            "initialisation violates invariant conjunct " +
                                std::to_string(failing) + ": " +
                                render_pred(*machine.invariant[(size_t)failing]));
    }
    BState state;
    state.valuation = std::move(exec.machine_vars);
    return state;
}

InvokeResult invoke(const BMachine& machine, const BState& state, const std::string& op_name,
                    const std::vector<Value>& args, const InvokeOptions& options) {
    InvokeResult result;
    result.state = state;

    const BOperation* op = machine.find_operation(op_name);
    if (!op)
        throw EvalError(EvalErrorKind::Internal, "no operation named " + op_name);
    if (args.size() != op->params.size())
        throw EvalError(EvalErrorKind::Internal, "argument count mismatch for " + op_name);

    MachineContext ctx(machine);
    BExec exec(ctx, options, op_name);
    exec.machine_vars = state.valuation;
    exec.diags = &result.diagnostics;

    std::map<std::string, std::optional<Value>> frame;
    for (size_t i = 0; i < op->params.size(); ++i)
        frame[op->params[i]] = args[i];
    for (const auto& o : op->outputs)
        frame[o] = std::nullopt;
    exec.scopes.push_back(std::move(frame));

    try {
        for (size_t i = 0; i < op->pre.size(); ++i) {
            if (!exec.truth(*op->pre[i])) {
                result.diagnostics.push_back(BDiag{BDiagKind::PreViolation,
                                                   op_name + " PRE conjunct " + std::to_string(i),
                                                   render_pred(*op->pre[i]),
                                                   EvalErrorKind::PreViolation});
                result.ok = false;
                return result;
            }
        }
        exec.exec(*op->body);
    } catch (const EvalError& e) {
        result.diagnostics.push_back(BDiag{BDiagKind::RangeError, op_name, e.what(), e.kind()});
        result.ok = false;
        return result;
    } catch (const NonDisjointError& e) {
        result.diagnostics.push_back(BDiag{BDiagKind::NonDisjointParallel, op_name,
                                           "parallel branches write '" + e.name + "' twice",
                                           EvalErrorKind::Internal});
        result.ok = false;
        return result;
    }

    for (const auto& o : op->outputs) {
        auto& slot = exec.scopes.back()[o];
        if (!slot) {
            result.diagnostics.push_back(BDiag{BDiagKind::RangeError, op_name,
                                               "output '" + o + "' left unassigned",
                                               EvalErrorKind::Internal});
            result.ok = false;
            return result;
        }
        result.outputs.emplace(o, *slot);
    }

    result.state.valuation = std::move(exec.machine_vars);

    if (!options.defer_machine_invariant) {
        BExec check(ctx, options, op_name);
        check.machine_vars = result.state.valuation;
        int failing = first_failing_conjunct(ctx, check);
        if (failing >= 0)
            result.diagnostics.push_back(
                BDiag{BDiagKind::InvariantViolation, "INVARIANT conjunct " + std::to_string(failing),
                      render_pred(*machine.invariant[(size_t)failing]),
                      EvalErrorKind::Invariant});
    }
    return result;
}

InvariantCheck check_invariant(const BMachine& machine, const BState& state) {
    MachineContext ctx(machine);
    InvokeOptions options;
    BExec exec(ctx, options, "");
    exec.machine_vars = state.valuation;
    InvariantCheck out;
    int failing = first_failing_conjunct(ctx, exec);
    if (failing >= 0) {
        out.holds = false;
        out.failing_conjunct = failing;
        out.rendering = render_pred(*machine.invariant[(size_t)failing]);
    }
    return out;
}

} // namespace scb
