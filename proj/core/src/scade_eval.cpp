#include "scb/scade_eval.hpp"

#include "scb/schedule.hpp"

#include <functional>

namespace scb {

namespace {

void collect_machines(const std::vector<BodyItemPtr>& items,
                      std::vector<const StateMachine*>& out) {
    for (const auto& item : items) {
        switch (item->kind) {
        case BodyItem::Kind::Equation:
            break;
        case BodyItem::Kind::ActivateIf:
            collect_machines(item->activate.then_items, out);
            collect_machines(item->activate.else_items, out);
            break;
        case BodyItem::Kind::StateMachine:
            out.push_back(&item->machine);
            for (const auto& s : item->machine.states)
                collect_machines(s.body, out);
            break;
        }
    }
}

Value eval_expr(const TypedProgram& prog, const Expr& e, const CycleValues& env,
                const std::string& node_name);

class Executor {
public:
    Executor(const TypedProgram& prog, const NodeDecl& node, NodeState& state)
        : prog_(prog), node_(node), state_(state) {}

    CycleValues run(const CycleValues& inputs) {
        load_inputs(inputs);
        exec_items(node_.body);
        CycleValues outputs;
        for (const auto& out : node_.outputs)
            outputs.emplace(out.name, lookup(out.name, out.pos));
        return outputs;
    }

private:
    const TypedProgram& prog_;
    const NodeDecl& node_;
    NodeState& state_;
    CycleValues env_;

    void load_inputs(const CycleValues& inputs) {
        for (const auto& in : node_.inputs) {
            auto it = inputs.find(in.name);
            if (it == inputs.end())
                throw EvalError(EvalErrorKind::MissingInput, "missing input '" + in.name + "'");
            try {
                env_[in.name] = coerce_value(it->second, *in.type);
            } catch (const EvalError& e) {
                // bad inputs are a caller error, same as a violated B PRE
                throw EvalError(EvalErrorKind::PreViolation,
                                "input '" + in.name + "': " + e.what());
            }
        }
        if (inputs.size() != node_.inputs.size())
            throw EvalError(EvalErrorKind::PreViolation, "unexpected extra inputs supplied");
    }

    const Value& lookup(const std::string& name, SourcePos pos) const {
        auto it = env_.find(name);
        if (it != env_.end())
            return it->second;
        auto cit = prog_.const_values.find(name);
        if (cit != prog_.const_values.end())
            return cit->second;
        throw EvalError(EvalErrorKind::Internal,
                        "read of unassigned flow '" + name + "' at line " +
                            std::to_string(pos.line));
    }

    void write(const std::string& name, Value v) {
        const VarDecl* decl = find_decl(name);
        if (!decl)
            throw EvalError(EvalErrorKind::Internal, "write to undeclared flow '" + name + "'");
        env_[name] = coerce_value(std::move(v), *decl->type);
    }

    const VarDecl* find_decl(const std::string& name) const {
        if (const VarDecl* d = node_.find_var(name))
            return d;
        // branch- and state-local declarations; names are node-unique
        const VarDecl* found = nullptr;
        std::function<void(const std::vector<BodyItemPtr>&)> walk =
            [&](const std::vector<BodyItemPtr>& items) {
                for (const auto& item : items) {
                    if (found)
                        return;
                    if (item->kind == BodyItem::Kind::ActivateIf) {
                        for (const auto& v : item->activate.then_locals)
                            if (v.name == name) found = &v;
                        for (const auto& v : item->activate.else_locals)
                            if (v.name == name) found = &v;
                        walk(item->activate.then_items);
                        walk(item->activate.else_items);
                    } else if (item->kind == BodyItem::Kind::StateMachine) {
                        for (const auto& s : item->machine.states) {
                            for (const auto& v : s.locals)
                                if (v.name == name) found = &v;
                            walk(s.body);
                        }
                    }
                }
            };
        walk(node_.body);
        return found;
    }

    void exec_items(const std::vector<BodyItemPtr>& items) {
        Schedule schedule = build_schedule(items);
        for (const auto& entry : schedule) {
            if (entry.kind == SchedEntry::Kind::FbyShift)
                exec_shift(*entry.item);
            else
                exec_item(*entry.item);
        }
    }

    void exec_item(const BodyItem& item) {
        switch (item.kind) {
        case BodyItem::Kind::Equation:
            exec_equation(item.equation);
            return;
        case BodyItem::Kind::ActivateIf: {
            const auto& act = item.activate;
            bool cond = eval(*act.condition).as_bool();
            exec_items(cond ? act.then_items : act.else_items);
            return;
        }
        case BodyItem::Kind::StateMachine:
            exec_machine(item.machine);
            return;
        }
    }

    void exec_equation(const Equation& eq) {
        const Expr& rhs = *eq.rhs;
        if (rhs.kind == Expr::Kind::Fby) {
            // read step only; the shift is scheduled separately
            auto& buffer = state_.fby_buffers.at(rhs.fby_id);
            write(eq.lhs[0], buffer.front());
            return;
        }
        if (rhs.kind == Expr::Kind::HigherOrder) {
            auto results = eval_higher_order(prog_, rhs, env_);
            for (size_t i = 0; i < eq.lhs.size(); ++i)
                write(eq.lhs[i], std::move(results[i]));
            return;
        }
        if (rhs.kind == Expr::Kind::Call && eq.lhs.size() != 1) {
            auto results = apply_call(rhs);
            for (size_t i = 0; i < eq.lhs.size(); ++i)
                write(eq.lhs[i], std::move(results[i]));
            return;
        }
        write(eq.lhs[0], eval(rhs));
    }

    void exec_shift(const BodyItem& item) {
        const Expr& fby = *item.equation.rhs;
        Value v = eval(*fby.fby_input);
        auto& buffer = state_.fby_buffers.at(fby.fby_id);
        const FbyInfo& info = prog_.info(node_.name).fbys.at((size_t)fby.fby_id);
        buffer.erase(buffer.begin());
        buffer.push_back(coerce_value(std::move(v), *info.flow_type));
    }

    void exec_machine(const StateMachine& m) {
        const std::string& current = state_.sm_states.at(m.name);
        const StateDecl* active = m.find_state(current);
        for (const auto& t : active->transitions) {
            if (eval(*t.condition).as_bool()) {
                // strong transition: the target state produces this cycle
                state_.sm_states[m.name] = t.target;
                exec_items(m.find_state(t.target)->body);
                return;
            }
        }
        exec_items(active->body);
    }

    std::vector<Value> apply_call(const Expr& call) {
        const NodeDecl& fn = prog_.node(call.name);
        std::vector<Value> args;
        args.reserve(call.args.size());
        for (const auto& a : call.args)
            args.push_back(eval(*a));
        return call_function(prog_, fn, args);
    }

    Value eval(const Expr& e) { return eval_expr(prog_, e, env_, node_.name); }
};

Value lookup_env(const TypedProgram& prog, const CycleValues& env, const std::string& name,
                 SourcePos pos) {
    auto it = env.find(name);
    if (it != env.end())
        return it->second;
    auto cit = prog.const_values.find(name);
    if (cit != prog.const_values.end())
        return cit->second;
    throw EvalError(EvalErrorKind::Internal,
                    "read of unassigned flow '" + name + "' at line " + std::to_string(pos.line));
}

Value eval_expr(const TypedProgram& prog, const Expr& e, const CycleValues& env,
                const std::string& node_name) {
    auto rec = [&](const Expr& x) { return eval_expr(prog, x, env, node_name); };
    switch (e.kind) {
    case Expr::Kind::IntLit: {
        long long lo = 0, hi = 0;
        if (e.type && e.type->is_int())
            base_type_range(e.type->base, lo, hi);
        return Value::make_int(e.int_val, lo, hi);
    }
    case Expr::Kind::BoolLit:
        return Value::make_bool(e.bool_val);
    case Expr::Kind::VarRef:
        return lookup_env(prog, env, e.name, e.pos);
    case Expr::Kind::EnumRef:
        return Value::make_enum(e.type->name, e.name);
    case Expr::Kind::Unary: {
        Value v = rec(*e.args[0]);
        if (e.unary_op == UnaryOp::Not)
            return Value::make_bool(!v.as_bool());
        return Value::make_int(checked_sub(0, v.as_int()), v.range_lo(), v.range_hi());
    }
    case Expr::Kind::Binary: {
        // strict evaluation on both sides keeps faults aligned with the
        // translated substitutions
        Value a = rec(*e.args[0]);
        Value b = rec(*e.args[1]);
        switch (e.binary_op) {
        case BinaryOp::Add: return Value::make_int(checked_add(a.as_int(), b.as_int()), 0, 0);
        case BinaryOp::Sub: return Value::make_int(checked_sub(a.as_int(), b.as_int()), 0, 0);
        case BinaryOp::Mul: return Value::make_int(checked_mul(a.as_int(), b.as_int()), 0, 0);
        case BinaryOp::Div: return Value::make_int(checked_div(a.as_int(), b.as_int()), 0, 0);
        case BinaryOp::Mod: return Value::make_int(checked_mod(a.as_int(), b.as_int()), 0, 0);
        case BinaryOp::Eq: return Value::make_bool(a == b);
        case BinaryOp::Ne: return Value::make_bool(!(a == b));
        case BinaryOp::Lt: return Value::make_bool(a.as_int() < b.as_int());
        case BinaryOp::Le: return Value::make_bool(a.as_int() <= b.as_int());
        case BinaryOp::Gt: return Value::make_bool(a.as_int() > b.as_int());
        case BinaryOp::Ge: return Value::make_bool(a.as_int() >= b.as_int());
        case BinaryOp::And: return Value::make_bool(a.as_bool() && b.as_bool());
        case BinaryOp::Or: return Value::make_bool(a.as_bool() || b.as_bool());
        }
        break;
    }
    case Expr::Kind::IfThenElse:
        return rec(*e.args[0]).as_bool() ? rec(*e.args[1]) : rec(*e.args[2]);
    case Expr::Kind::CaseOf: {
        Value scr = rec(*e.scrutinee);
        const CaseArm* fallback = nullptr;
        for (const auto& arm : e.case_arms) {
            if (!arm.pattern) {
                fallback = &arm;
                continue;
            }
            if (rec(*arm.pattern) == scr)
                return rec(*arm.value);
        }
        return rec(*fallback->value);
    }
    case Expr::Kind::StructMake: {
        std::vector<std::pair<std::string, Value>> fields;
        for (size_t i = 0; i < e.args.size(); ++i)
            fields.emplace_back(e.type->fields[i].first, rec(*e.args[i]));
        return Value::make_record(std::move(fields));
    }
    case Expr::Kind::FieldAccess:
        return rec(*e.args[0]).field(e.name);
    case Expr::Kind::ArrayIndex: {
        Value arr = rec(*e.args[0]);
        long long i = rec(*e.args[1]).as_int();
        if (i < 0 || i >= (long long)arr.cells().size())
            throw EvalError(EvalErrorKind::Range,
                            "index " + std::to_string(i) + " outside 0.." +
                                std::to_string(arr.cells().size() - 1));
        return arr.cells()[(size_t)i];
    }
    case Expr::Kind::Call: {
        const NodeDecl& fn = prog.node(e.name);
        std::vector<Value> args;
        for (const auto& a : e.args)
            args.push_back(rec(*a));
        return call_function(prog, fn, args).at(0);
    }
    case Expr::Kind::Fby:
    case Expr::Kind::HigherOrder:
        break;
    }
    throw EvalError(EvalErrorKind::Internal, "expression not evaluable in this position");
}

} // namespace

NodeState init_state(const TypedProgram& program, const NodeDecl& node) {
    NodeState state;
    for (const auto& info : program.info(node.name).fbys)
        state.fby_buffers[info.id] = std::vector<Value>((size_t)info.depth, info.init);
    std::vector<const StateMachine*> machines;
    collect_machines(node.body, machines);
    for (const auto* m : machines)
        state.sm_states[m->name] = m->initial_state()->name;
    return state;
}

CycleValues step(const TypedProgram& program, const NodeDecl& node, NodeState& state,
                 const CycleValues& inputs) {
    Executor exec(program, node, state);
    return exec.run(inputs);
}

std::vector<Value> call_function(const TypedProgram& program, const NodeDecl& fn,
                                 const std::vector<Value>& args) {
    // operators are mathematical substitutions: no range enforcement on
    // parameter binding or internal flows, mirroring their inlined form
    CycleValues env;
    for (size_t i = 0; i < fn.inputs.size(); ++i)
        env[fn.inputs[i].name] = args.at(i);
    Schedule schedule = build_schedule(fn.body);
    for (const auto& entry : schedule) {
        const Equation& eq = entry.item->equation;
        env[eq.lhs[0]] = eval_expr(program, *eq.rhs, env, fn.name);
    }
    std::vector<Value> out;
    out.reserve(fn.outputs.size());
    for (const auto& o : fn.outputs)
        out.push_back(lookup_env(program, env, o.name, o.pos));
    return out;
}

std::vector<Value> eval_higher_order(const TypedProgram& program, const Expr& app,
                                     const CycleValues& env) {
    const NodeDecl& op = program.node(app.hof_op);
    const bool indexed = hof_is_indexed(app.hof_variant);
    const bool whiled = hof_is_while(app.hof_variant);
    const int acc_count = app.hof_acc_count;
    const long long size = app.hof_size;
    const size_t first_value = (whiled ? 1 : 0) + (size_t)acc_count;
    const size_t m = op.outputs.size() - first_value;

    auto ev = [&](const Expr& x) { return eval_expr(program, x, env, app.hof_op); };

    std::vector<Value> arrays;
    for (const auto& a : app.hof_arrays)
        arrays.push_back(ev(*a));
    std::vector<Value> accs;
    for (const auto& a : app.hof_acc_inits)
        accs.push_back(ev(*a));
    bool cond = whiled ? ev(*app.hof_init_cond).as_bool() : true;
    std::vector<Value> defaults;
    for (const auto& d : app.hof_defaults)
        defaults.push_back(ev(*d));

    std::vector<std::vector<Value>> cells(m);
    for (auto& column : cells)
        column.resize((size_t)size);

    long long idx = 0;
    for (long long i = 0; i < size; ++i) {
        if (whiled && !cond)
            break;
        std::vector<Value> args;
        if (indexed)
            args.push_back(Value::make_int(i, 0, size - 1));
        for (const auto& a : accs)
            args.push_back(a);
        for (const auto& arr : arrays)
            args.push_back(arr.cells()[(size_t)i]);
        std::vector<Value> rets = call_function(program, op, args);
        size_t r = 0;
        if (whiled)
            cond = rets[r++].as_bool();
        for (int k = 0; k < acc_count; ++k)
            accs[(size_t)k] = rets[r++];
        for (size_t k = 0; k < m; ++k)
            cells[k][(size_t)i] = coerce_value(rets[r++], *op.outputs[first_value + k].type);
        idx = i + 1;
    }
    // unreached cells take the declared defaults
    for (size_t k = 0; k < m; ++k)
        for (long long i = idx; i < size; ++i)
            cells[k][(size_t)i] = coerce_value(defaults.at(k), *op.outputs[first_value + k].type);

    std::vector<Value> results;
    if (app.hof_binds_control) {
        results.push_back(Value::make_int(idx, 0, size));
        if (app.hof_variant == HofVariant::Mapfoldw || app.hof_variant == HofVariant::Mapfoldwi)
            results.push_back(Value::make_bool(cond));
    }
    for (auto& a : accs)
        results.push_back(std::move(a));
    for (auto& column : cells)
        results.push_back(Value::make_array(std::move(column)));
    return results;
}

} // namespace scb
