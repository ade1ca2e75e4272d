#include "scb/typecheck.hpp"

#include "scb/schedule.hpp"

#include <algorithm>
#include <set>

namespace scb {

namespace {

class Checker {
public:
    explicit Checker(ScadeProgram program) { out_.program = std::move(program); }

    TypedProgram run() {
        resolve_declared_types();
        evaluate_constants();
        for (auto& node : out_.program.nodes)
            check_node(node);
        return std::move(out_);
    }

private:
    TypedProgram out_;
    std::map<std::string, TypePtr> base_cache_;

    std::set<std::string> machine_names_; // global, they become B set names
    std::set<std::string> state_names_;   // global, they become B set members

    // per-node state
    NodeDecl* node_ = nullptr;
    NodeInfo* info_ = nullptr;
    std::map<std::string, TypePtr> scope_; // visible flows (inputs+outputs+locals, nested)
    std::set<std::string> node_names_;     // every flow name of the node, branch locals included
    int next_fby_ = 0;
    int next_hof_ = 0;

    [[noreturn]] void fail(SourcePos pos, const std::string& msg) const {
        throw FrontendError(pos, msg);
    }

    TypePtr base(BaseType b) {
        std::string key = base_type_name(b);
        auto it = base_cache_.find(key);
        if (it != base_cache_.end())
            return it->second;
        auto t = std::make_shared<TypeExpr>();
        t->kind = TypeExpr::Kind::Base;
        t->base = b;
        base_cache_[key] = t;
        return t;
    }

    // ---- types and constants ----------------------------------------------

    void resolve_declared_types() {
        for (auto& decl : out_.program.types) {
            TypePtr resolved = resolve_type(decl.type, decl.pos);
            out_.resolved_types[decl.name] = resolved;
            decl.type = resolved;
            if (resolved->kind == TypeExpr::Kind::Enum) {
                for (size_t i = 0; i < resolved->members.size(); ++i) {
                    const auto& m = resolved->members[i];
                    if (out_.enum_member_set.count(m))
                        fail(decl.pos, "enum member '" + m + "' already declared; members share one namespace");
                    out_.enum_member_set[m] = decl.name;
                    out_.enum_member_index[m] = (int)i;
                }
            }
        }
    }

    TypePtr resolve_type(const TypePtr& t, SourcePos pos) {
        switch (t->kind) {
        case TypeExpr::Kind::Base:
            return base(t->base);
        case TypeExpr::Kind::Named: {
            auto it = out_.resolved_types.find(t->name);
            if (it != out_.resolved_types.end())
                return it->second;
            // forward references between declared types are not allowed
            fail(pos, "unknown type '" + t->name + "'");
        }
        case TypeExpr::Kind::Enum:
            return t;
        case TypeExpr::Kind::Array: {
            auto arr = std::make_shared<TypeExpr>();
            arr->kind = TypeExpr::Kind::Array;
            arr->elem = resolve_type(t->elem, pos);
            arr->size = t->size;
            arr->size_name = t->size_name; // kept so emission can stay symbolic
            if (!t->size_name.empty())
                arr->size = const_int(t->size_name, pos);
            if (arr->size < 1)
                fail(pos, "array size must be at least 1");
            return arr;
        }
        case TypeExpr::Kind::Struct: {
            auto s = std::make_shared<TypeExpr>();
            s->kind = TypeExpr::Kind::Struct;
            s->name = t->name;
            std::set<std::string> seen;
            for (const auto& [fname, ftype] : t->fields) {
                if (!seen.insert(fname).second)
                    fail(pos, "duplicate field '" + fname + "'");
                s->fields.emplace_back(fname, resolve_type(ftype, pos));
            }
            return s;
        }
        }
        fail(pos, "unresolvable type");
    }

    long long const_int(const std::string& name, SourcePos pos) {
        auto it = out_.const_values.find(name);
        if (it == out_.const_values.end())
            fail(pos, "unknown constant '" + name + "'");
        if (it->second.kind() != Value::Kind::Int)
            fail(pos, "constant '" + name + "' is not an integer");
        return it->second.as_int();
    }

    void evaluate_constants() {
        for (auto& decl : out_.program.consts) {
            decl.type = resolve_type(decl.type, decl.pos);
            Value v = literal_value(*decl.value, decl.type, decl.pos);
            decl.value->type = decl.type;
            out_.const_values[decl.name] = v;
        }
    }

    Value literal_value(const Expr& e, const TypePtr& type, SourcePos pos) {
        switch (e.kind) {
        case Expr::Kind::IntLit: {
            if (!type->is_int())
                fail(pos, "integer literal where " + type_to_string(*type) + " expected");
            long long lo, hi;
            base_type_range(type->base, lo, hi);
            if (e.int_val < lo || e.int_val > hi)
                fail(pos, "literal " + std::to_string(e.int_val) + " out of range " +
                              std::to_string(lo) + ".." + std::to_string(hi));
            return Value::make_int(e.int_val, lo, hi);
        }
        case Expr::Kind::BoolLit:
            if (!type->is_bool())
                fail(pos, "boolean literal where " + type_to_string(*type) + " expected");
            return Value::make_bool(e.bool_val);
        case Expr::Kind::VarRef:
        case Expr::Kind::EnumRef: {
            auto cit = out_.const_values.find(e.name);
            if (cit != out_.const_values.end())
                return cit->second;
            auto mit = out_.enum_member_set.find(e.name);
            if (mit != out_.enum_member_set.end()) {
                if (type->kind != TypeExpr::Kind::Enum || type->name != mit->second)
                    fail(pos, "enum member '" + e.name + "' does not belong to " +
                                  type_to_string(*type));
                return Value::make_enum(mit->second, e.name);
            }
            fail(pos, "'" + e.name + "' is not a compile-time value");
        }
        default:
            fail(pos, "expected a literal");
        }
    }

    // ---- nodes -------------------------------------------------------------

    void check_node(NodeDecl& node) {
        node_ = &node;
        info_ = &out_.node_info[node.name];
        scope_.clear();
        node_names_.clear();
        next_fby_ = 0;
        next_hof_ = 0;

        auto declare = [&](VarDecl& v) {
            v.type = resolve_type(v.type, v.pos);
            if (out_.const_values.count(v.name) || out_.enum_member_set.count(v.name))
                fail(v.pos, "'" + v.name + "' shadows a global name");
            if (!scope_.emplace(v.name, v.type).second)
                fail(v.pos, "duplicate variable '" + v.name + "'");
            node_names_.insert(v.name);
        };
        for (auto& v : node.inputs) declare(v);
        for (auto& v : node.outputs) declare(v);
        for (auto& v : node.locals) declare(v);

        if (node.is_function)
            check_function_body(node);

        std::set<std::string> assignable;
        for (const auto& v : node.outputs) assignable.insert(v.name);
        for (const auto& v : node.locals) assignable.insert(v.name);

        std::set<std::string> defined = check_items(node.body, assignable, node.pos);

        for (const auto& v : node.outputs)
            if (!node.body.empty() && !defined.count(v.name))
                fail(v.pos, "output '" + v.name + "' is never defined");
        for (const auto& v : node.locals)
            if (!defined.count(v.name))
                fail(v.pos, "local '" + v.name + "' is never defined");

        validate_schedules(node.body);
    }

    // surface instantaneous cycles here rather than at first execution
    void validate_schedules(const std::vector<BodyItemPtr>& items) {
        build_schedule(items);
        for (const auto& item : items) {
            if (item->kind == BodyItem::Kind::ActivateIf) {
                validate_schedules(item->activate.then_items);
                validate_schedules(item->activate.else_items);
            } else if (item->kind == BodyItem::Kind::StateMachine) {
                for (const auto& s : item->machine.states)
                    validate_schedules(s.body);
            }
        }
    }

    void check_function_body(const NodeDecl& node) {
        for (const auto& item : node.body) {
            if (item->kind != BodyItem::Kind::Equation)
                fail(item->pos, "function '" + node.name + "' may contain equations only");
            if (!pure_expr(*item->equation.rhs))
                fail(item->equation.pos,
                     "function '" + node.name + "' must be stateless and first-order");
        }
    }

    static bool pure_expr(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::Fby:
        case Expr::Kind::HigherOrder:
        case Expr::Kind::Call:
            return false;
        default:
            break;
        }
        bool ok = true;
        auto walk = [&](const Expr& child) { ok = ok && pure_expr(child); };
        for (const auto& a : e.args) walk(*a);
        if (e.scrutinee) walk(*e.scrutinee);
        for (const auto& arm : e.case_arms) {
            if (arm.pattern) walk(*arm.pattern);
            walk(*arm.value);
        }
        return ok;
    }

    /// Check one scope's items. Returns the set of variables this item list
    /// defines (locals of nested branches excluded). Enforces single
    /// assignment within the scope.
    std::set<std::string> check_items(std::vector<BodyItemPtr>& items,
                                      const std::set<std::string>& assignable,
                                      SourcePos scope_pos) {
        std::set<std::string> defined;
        auto define = [&](const std::string& name, SourcePos pos) {
            if (!assignable.count(name))
                fail(pos, scope_.count(name)
                              ? "'" + name + "' is not assignable in this scope"
                              : "unknown identifier '" + name + "'");
            if (!defined.insert(name).second)
                fail(pos, "'" + name + "' is defined more than once");
        };

        for (auto& item : items) {
            switch (item->kind) {
            case BodyItem::Kind::Equation:
                check_equation(item->equation);
                for (const auto& n : item->equation.lhs)
                    define(n, item->equation.pos);
                break;
            case BodyItem::Kind::ActivateIf: {
                auto& act = item->activate;
                check_expr(*act.condition, base(BaseType::Bool));
                auto then_set = check_branch(act.then_locals, act.then_items, assignable, item->pos);
                auto else_set = check_branch(act.else_locals, act.else_items, assignable, item->pos);
                if (then_set != else_set)
                    fail(item->pos, "branches of '" + act.name + "' must define the same variables");
                for (const auto& n : then_set)
                    define(n, item->pos);
                break;
            }
            case BodyItem::Kind::StateMachine: {
                auto& m = item->machine;
                check_machine(m, assignable);
                std::set<std::string> state_set;
                bool first = true;
                for (auto& s : m.states) {
                    auto set = check_branch(s.locals, s.body, assignable, s.pos);
                    if (first) {
                        state_set = set;
                        first = false;
                    } else if (set != state_set) {
                        fail(s.pos, "states of '" + m.name + "' must define the same variables");
                    }
                }
                for (const auto& n : state_set)
                    define(n, item->pos);
                break;
            }
            }
        }
        (void)scope_pos;
        return defined;
    }

    std::set<std::string> check_branch(std::vector<VarDecl>& locals,
                                       std::vector<BodyItemPtr>& items,
                                       const std::set<std::string>& outer_assignable,
                                       SourcePos pos) {
        std::set<std::string> assignable = outer_assignable;
        std::vector<std::string> added;
        for (auto& v : locals) {
            v.type = resolve_type(v.type, v.pos);
            if (scope_.count(v.name) || out_.const_values.count(v.name) ||
                out_.enum_member_set.count(v.name))
                fail(v.pos, "local '" + v.name + "' shadows another name");
            // names must be unique across all branches of the node: they end
            // up in one flat operation scope after translation
            if (!node_names_.insert(v.name).second)
                fail(v.pos, "local '" + v.name + "' is already used elsewhere in this node");
            scope_.emplace(v.name, v.type);
            assignable.insert(v.name);
            added.push_back(v.name);
        }
        auto defined = check_items(items, assignable, pos);
        for (const auto& v : locals) {
            if (!defined.count(v.name))
                fail(v.pos, "local '" + v.name + "' is never defined");
            defined.erase(v.name);
        }
        for (const auto& n : added)
            scope_.erase(n);
        return defined;
    }

    void check_machine(StateMachine& m, const std::set<std::string>&) {
        info_->machine_names.push_back(m.name);
        if (!machine_names_.insert(m.name).second || out_.resolved_types.count(m.name))
            fail(m.pos, "state machine name '" + m.name + "' is already in use");
        int initials = 0;
        for (const auto& s : m.states) {
            if (s.is_initial)
                ++initials;
            // state names share the B set-member namespace with enum members
            if (out_.enum_member_set.count(s.name))
                fail(s.pos, "state '" + s.name + "' collides with an enum member");
            if (!state_names_.insert(s.name).second)
                fail(s.pos, "duplicate state name '" + s.name + "'");
        }
        if (initials != 1)
            fail(m.pos, "state machine '" + m.name + "' needs exactly one initial state");
        for (auto& s : m.states) {
            for (auto& t : s.transitions) {
                check_expr(*t.condition, base(BaseType::Bool));
                if (!m.find_state(t.target))
                    fail(t.pos, "unknown target state '" + t.target + "'");
            }
        }
    }

    // ---- equations ----------------------------------------------------------

    void check_equation(Equation& eq) {
        // whole-RHS forms first: iterator applications and operator calls may
        // bind several flows at once
        if (eq.rhs->kind == Expr::Kind::HigherOrder) {
            check_hof(eq);
            return;
        }
        if (eq.rhs->kind == Expr::Kind::Call) {
            check_call_equation(eq);
            return;
        }
        if (eq.lhs.size() != 1)
            fail(eq.pos, "only operator calls and iterators may define several flows");
        TypePtr want = var_type(eq.lhs[0], eq.pos);
        if (eq.rhs->kind != Expr::Kind::Fby)
            reject_nested_state(*eq.rhs);
        check_expr(*eq.rhs, want);
    }

    // fby and iterator applications must be whole right-hand sides; nesting
    // them inside larger expressions has no direct substitution form
    void reject_nested_state(const Expr& e) {
        if (e.kind == Expr::Kind::Fby)
            fail(e.pos, "fby must define a whole equation");
        if (e.kind == Expr::Kind::HigherOrder)
            fail(e.pos, "an iterator application must define a whole equation");
        for (const auto& a : e.args)
            reject_nested_state(*a);
        if (e.scrutinee)
            reject_nested_state(*e.scrutinee);
        for (const auto& arm : e.case_arms) {
            if (arm.pattern)
                reject_nested_state(*arm.pattern);
            reject_nested_state(*arm.value);
        }
    }

    TypePtr var_type(const std::string& name, SourcePos pos) {
        auto it = scope_.find(name);
        if (it == scope_.end())
            fail(pos, "unknown identifier '" + name + "'");
        return it->second;
    }

    void check_call_equation(Equation& eq) {
        Expr& call = *eq.rhs;
        const NodeDecl* fn = resolve_function(call.name, call.pos);
        if (call.args.size() != fn->inputs.size())
            fail(call.pos, "'" + call.name + "' expects " + std::to_string(fn->inputs.size()) +
                               " arguments");
        for (size_t i = 0; i < call.args.size(); ++i)
            check_expr(*call.args[i], fn->inputs[i].type);
        if (eq.lhs.size() != fn->outputs.size())
            fail(eq.pos, "'" + call.name + "' produces " + std::to_string(fn->outputs.size()) +
                             " outputs");
        for (size_t i = 0; i < eq.lhs.size(); ++i) {
            TypePtr want = var_type(eq.lhs[i], eq.pos);
            if (!same_type(*want, *fn->outputs[i].type))
                fail(eq.pos, "type mismatch binding output '" + fn->outputs[i].name + "' of '" +
                                 call.name + "'");
        }
        call.type = fn->outputs.empty() ? base(BaseType::Bool) : fn->outputs[0].type;
    }

    const NodeDecl* resolve_function(const std::string& name, SourcePos pos) {
        const NodeDecl* fn = out_.program.find_node(name);
        if (!fn)
            fail(pos, "unknown operator '" + name + "'");
        if (!fn->is_function)
            fail(pos, "'" + name + "' is a node; only functions may be applied here");
        if (fn->body.empty())
            fail(pos, "function '" + name + "' has no body");
        return fn;
    }

    void check_hof(Equation& eq) {
        Expr& app = *eq.rhs;
        HofVariant v = app.hof_variant;
        const NodeDecl* op = resolve_function(app.hof_op, app.pos);

        if (!app.hof_size_name.empty())
            app.hof_size = const_int(app.hof_size_name, app.pos);
        if (app.hof_size < 1)
            fail(app.pos, "iteration size must be at least 1");

        int acc = 0;
        if (v == HofVariant::Fold || v == HofVariant::Foldi || v == HofVariant::Foldw ||
            v == HofVariant::Foldwi) {
            acc = 1;
        } else if (hof_has_acc(v)) {
            acc = app.hof_acc_count;
            if (acc < 1)
                fail(app.pos, std::string(to_string(v)) + " needs an accumulator count of at least 1");
        }
        app.hof_acc_count = acc;

        // split accumulator seeds from array arguments
        if ((int)app.hof_arrays.size() < acc)
            fail(app.pos, "missing accumulator seed arguments");
        if (app.hof_acc_inits.empty() && acc > 0) {
            for (int i = 0; i < acc; ++i)
                app.hof_acc_inits.push_back(std::move(app.hof_arrays[i]));
            app.hof_arrays.erase(app.hof_arrays.begin(), app.hof_arrays.begin() + acc);
        }

        bool indexed = hof_is_indexed(v);
        bool whiled = hof_is_while(v);
        size_t n = app.hof_arrays.size();
        if (n == 0 && hof_has_values(v))
            fail(app.pos, std::string(to_string(v)) + " needs at least one array argument");

        size_t want_params = (indexed ? 1 : 0) + acc + n;
        if (op->inputs.size() != want_params)
            fail(app.pos, "operator '" + op->name + "' takes " +
                              std::to_string(op->inputs.size()) + " inputs, but " +
                              std::to_string(want_params) + " would be supplied");
        size_t pi = 0;
        if (indexed) {
            if (!op->inputs[pi].type->is_int())
                fail(app.pos, "first input of '" + op->name + "' must be an integer index");
            ++pi;
        }
        for (int i = 0; i < acc; ++i, ++pi)
            check_expr(*app.hof_acc_inits[i], op->inputs[pi].type);
        for (size_t i = 0; i < n; ++i, ++pi) {
            auto arr = std::make_shared<TypeExpr>();
            arr->kind = TypeExpr::Kind::Array;
            arr->elem = op->inputs[pi].type;
            arr->size = app.hof_size;
            check_expr(*app.hof_arrays[i], arr);
        }

        size_t oi = 0;
        if (whiled) {
            if (op->outputs.empty() || !op->outputs[0].type->is_bool())
                fail(app.pos, "first output of '" + op->name + "' must be the continuation flag");
            ++oi;
        }
        for (int i = 0; i < acc; ++i, ++oi) {
            if (oi >= op->outputs.size())
                fail(app.pos, "operator '" + op->name + "' yields too few outputs");
            if (!same_type(*op->outputs[oi].type, *op->inputs[(indexed ? 1 : 0) + i].type))
                fail(app.pos, "accumulator type of '" + op->name + "' must match its seed input");
        }
        size_t m = op->outputs.size() - oi;
        if (!hof_has_values(v) && m != 0)
            fail(app.pos, std::string(to_string(v)) + " operator must yield the accumulator only");
        if (hof_has_values(v) && m == 0)
            fail(app.pos, std::string(to_string(v)) + " operator must yield at least one value");

        if (whiled) {
            if (!app.hof_init_cond)
                fail(app.pos, std::string(to_string(v)) + " needs an 'if' start condition");
            check_expr(*app.hof_init_cond, base(BaseType::Bool));
        } else if (app.hof_init_cond) {
            fail(app.pos, std::string(to_string(v)) + " takes no 'if' condition");
        }

        bool wants_defaults = whiled && hof_has_values(v);
        if (wants_defaults) {
            if (app.hof_defaults.size() != m)
                fail(app.pos, "expected " + std::to_string(m) + " default value(s)");
            for (size_t i = 0; i < m; ++i)
                check_expr(*app.hof_defaults[i], op->outputs[oi + i].type);
        } else if (!app.hof_defaults.empty()) {
            fail(app.pos, std::string(to_string(v)) + " takes no defaults");
        }

        // expected left-hand side: [idx [, cond]] accs..., value arrays...
        std::vector<TypePtr> full;
        std::vector<TypePtr> plain;
        if (whiled)
            full.push_back(nullptr); // idx: any integer flow
        if (v == HofVariant::Mapfoldw || v == HofVariant::Mapfoldwi)
            full.push_back(base(BaseType::Bool)); // final cond
        for (int i = 0; i < acc; ++i) {
            TypePtr t = op->inputs[(indexed ? 1 : 0) + i].type;
            full.push_back(t);
            plain.push_back(t);
        }
        for (size_t i = 0; i < m; ++i) {
            auto arr = std::make_shared<TypeExpr>();
            arr->kind = TypeExpr::Kind::Array;
            arr->elem = op->outputs[oi + i].type;
            arr->size = app.hof_size;
            full.push_back(arr);
            plain.push_back(arr);
        }

        const std::vector<TypePtr>* shape = nullptr;
        if (eq.lhs.size() == full.size())
            shape = &full;
        else if (eq.lhs.size() == plain.size())
            shape = &plain;
        else
            fail(eq.pos, "left-hand side arity does not match " + std::string(to_string(v)) +
                             " (expected " + std::to_string(plain.size()) + " or " +
                             std::to_string(full.size()) + " flows)");
        app.hof_binds_control = shape == &full && full.size() != plain.size();

        for (size_t i = 0; i < eq.lhs.size(); ++i) {
            TypePtr want = var_type(eq.lhs[i], eq.pos);
            TypePtr got = (*shape)[i];
            if (!got) {
                if (!want->is_int())
                    fail(eq.pos, "'" + eq.lhs[i] + "' must be an integer flow to bind the stop index");
                continue;
            }
            if (!same_type(*want, *got))
                fail(eq.pos, "type mismatch binding '" + eq.lhs[i] + "'");
        }

        app.hof_id = next_hof_++;
        app.type = plain.empty() ? base(BaseType::Bool) : plain[0];
    }

    // ---- expressions ---------------------------------------------------------

    void check_expr(Expr& e, TypePtr expected) {
        switch (e.kind) {
        case Expr::Kind::IntLit: {
            TypePtr t = expected && expected->is_int() ? expected : base(BaseType::Int32);
            if (expected && !expected->is_int())
                fail(e.pos, "integer literal where " + type_to_string(*expected) + " expected");
            long long lo, hi;
            base_type_range(t->base, lo, hi);
            if (e.int_val < lo || e.int_val > hi)
                fail(e.pos, "literal " + std::to_string(e.int_val) + " out of range " +
                                std::to_string(lo) + ".." + std::to_string(hi));
            e.type = t;
            return;
        }
        case Expr::Kind::BoolLit:
            if (expected && !expected->is_bool())
                fail(e.pos, "boolean literal where " + type_to_string(*expected) + " expected");
            e.type = base(BaseType::Bool);
            return;
        case Expr::Kind::VarRef:
        case Expr::Kind::EnumRef: {
            auto vit = scope_.find(e.name);
            if (vit != scope_.end()) {
                e.kind = Expr::Kind::VarRef;
                e.type = vit->second;
            } else if (auto cit = out_.const_values.find(e.name); cit != out_.const_values.end()) {
                const ConstDecl* c = out_.program.find_const(e.name);
                e.kind = Expr::Kind::VarRef;
                e.type = c->type;
            } else if (auto mit = out_.enum_member_set.find(e.name);
                       mit != out_.enum_member_set.end()) {
                e.kind = Expr::Kind::EnumRef;
                e.type = out_.resolved_types.at(mit->second);
            } else {
                fail(e.pos, "unknown identifier '" + e.name + "'");
            }
            require(e, expected);
            return;
        }
        case Expr::Kind::Unary: {
            if (e.unary_op == UnaryOp::Not) {
                check_expr(*e.args[0], base(BaseType::Bool));
                e.type = base(BaseType::Bool);
            } else {
                check_expr(*e.args[0], expected && expected->is_int() ? expected : nullptr);
                if (!e.args[0]->type->is_int())
                    fail(e.pos, "operand of unary '-' must be an integer");
                e.type = e.args[0]->type;
            }
            require(e, expected);
            return;
        }
        case Expr::Kind::Binary:
            check_binary(e, expected);
            return;
        case Expr::Kind::IfThenElse: {
            check_expr(*e.args[0], base(BaseType::Bool));
            check_expr(*e.args[1], expected);
            check_expr(*e.args[2], e.args[1]->type);
            e.type = e.args[1]->type;
            require(e, expected);
            return;
        }
        case Expr::Kind::CaseOf: {
            check_expr(*e.scrutinee, nullptr);
            TypePtr scr = e.scrutinee->type;
            if (!scr->is_int() && scr->kind != TypeExpr::Kind::Enum && !scr->is_bool())
                fail(e.pos, "case scrutinee must be an integer, boolean or enum flow");
            bool has_default = false;
            std::vector<const Expr*> pats;
            TypePtr arm_type = expected;
            for (auto& arm : e.case_arms) {
                if (!arm.pattern) {
                    if (has_default)
                        fail(e.pos, "more than one default arm");
                    has_default = true;
                } else {
                    check_expr(*arm.pattern, scr);
                    if (arm.pattern->kind != Expr::Kind::IntLit &&
                        arm.pattern->kind != Expr::Kind::BoolLit &&
                        arm.pattern->kind != Expr::Kind::EnumRef)
                        fail(arm.pattern->pos, "case patterns must be literals or enum members");
                    for (const auto* p : pats)
                        if (ast_patterns_equal(*p, *arm.pattern))
                            fail(arm.pattern->pos, "duplicate case pattern");
                    pats.push_back(arm.pattern.get());
                }
                check_expr(*arm.value, arm_type);
                if (!arm_type)
                    arm_type = arm.value->type;
            }
            if (!has_default)
                fail(e.pos, "case expression needs a default '_' arm");
            e.type = arm_type;
            require(e, expected);
            return;
        }
        case Expr::Kind::Fby: {
            TypePtr flow = expected;
            check_expr(*e.fby_input, flow);
            if (!flow)
                flow = e.fby_input->type;
            if (!flow->is_int() && !flow->is_bool() && flow->kind != TypeExpr::Kind::Enum)
                fail(e.pos, "fby carries scalar flows only");
            if (!e.fby_depth_name.empty())
                e.fby_depth = const_int(e.fby_depth_name, e.pos);
            if (e.fby_depth < 1)
                fail(e.pos, "fby depth must be at least 1");
            Value init = literal_value(*e.fby_init, flow, e.fby_init->pos);
            e.fby_init->type = flow;
            e.type = flow;
            e.fby_id = next_fby_++;
            info_->fbys.push_back(FbyInfo{e.fby_id, e.fby_depth, init, flow});
            require(e, expected);
            return;
        }
        case Expr::Kind::StructMake: {
            auto tit = out_.resolved_types.find(e.name);
            if (tit == out_.resolved_types.end() || tit->second->kind != TypeExpr::Kind::Struct)
                fail(e.pos, "'" + e.name + "' is not a structure type");
            TypePtr st = tit->second;
            if (e.args.size() != st->fields.size())
                fail(e.pos, "'" + e.name + "' has " + std::to_string(st->fields.size()) +
                                " fields");
            for (size_t i = 0; i < e.args.size(); ++i)
                check_expr(*e.args[i], st->fields[i].second);
            e.type = st;
            require(e, expected);
            return;
        }
        case Expr::Kind::FieldAccess: {
            check_expr(*e.args[0], nullptr);
            TypePtr rec = e.args[0]->type;
            if (rec->kind != TypeExpr::Kind::Struct)
                fail(e.pos, "field access on a non-structure value");
            for (const auto& [fname, ftype] : rec->fields) {
                if (fname == e.name) {
                    e.type = ftype;
                    require(e, expected);
                    return;
                }
            }
            fail(e.pos, "no field '" + e.name + "' in " + type_to_string(*rec));
        }
        case Expr::Kind::ArrayIndex: {
            check_expr(*e.args[0], nullptr);
            TypePtr arr = e.args[0]->type;
            if (arr->kind != TypeExpr::Kind::Array)
                fail(e.pos, "indexing a non-array value");
            check_expr(*e.args[1], nullptr);
            if (!e.args[1]->type->is_int())
                fail(e.pos, "array index must be an integer");
            e.type = arr->elem;
            require(e, expected);
            return;
        }
        case Expr::Kind::HigherOrder:
            fail(e.pos, "an iterator application must define a whole equation");
        case Expr::Kind::Call: {
            const NodeDecl* fn = resolve_function(e.name, e.pos);
            if (fn->outputs.size() != 1)
                fail(e.pos, "'" + e.name + "' yields " + std::to_string(fn->outputs.size()) +
                                " outputs and cannot be used inside an expression");
            if (e.args.size() != fn->inputs.size())
                fail(e.pos, "'" + e.name + "' expects " + std::to_string(fn->inputs.size()) +
                                " arguments");
            for (size_t i = 0; i < e.args.size(); ++i)
                check_expr(*e.args[i], fn->inputs[i].type);
            e.type = fn->outputs[0].type;
            require(e, expected);
            return;
        }
        }
    }

    static bool ast_patterns_equal(const Expr& a, const Expr& b) {
        if (a.kind != b.kind)
            return false;
        if (a.kind == Expr::Kind::IntLit)
            return a.int_val == b.int_val;
        if (a.kind == Expr::Kind::BoolLit)
            return a.bool_val == b.bool_val;
        return a.name == b.name;
    }

    void check_binary(Expr& e, TypePtr expected) {
        Expr& lhs = *e.args[0];
        Expr& rhs = *e.args[1];
        switch (e.binary_op) {
        case BinaryOp::And:
        case BinaryOp::Or:
            check_expr(lhs, base(BaseType::Bool));
            check_expr(rhs, base(BaseType::Bool));
            e.type = base(BaseType::Bool);
            break;
        case BinaryOp::Add: case BinaryOp::Sub: case BinaryOp::Mul:
        case BinaryOp::Div: case BinaryOp::Mod: {
            TypePtr hint = expected && expected->is_int() ? expected : nullptr;
            infer_pair(lhs, rhs, hint, e.pos, /*want_int=*/true);
            e.type = lhs.type;
            break;
        }
        case BinaryOp::Eq: case BinaryOp::Ne: {
            infer_pair(lhs, rhs, nullptr, e.pos, /*want_int=*/false);
            e.type = base(BaseType::Bool);
            break;
        }
        case BinaryOp::Lt: case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge: {
            infer_pair(lhs, rhs, nullptr, e.pos, /*want_int=*/true);
            e.type = base(BaseType::Bool);
            break;
        }
        }
        require(e, expected);
    }

    // Type both operands consistently; literals adopt the other side's type.
    void infer_pair(Expr& lhs, Expr& rhs, TypePtr hint, SourcePos pos, bool want_int) {
        auto is_literal = [](const Expr& x) {
            return x.kind == Expr::Kind::IntLit || x.kind == Expr::Kind::BoolLit;
        };
        if (!is_literal(lhs)) {
            check_expr(lhs, hint);
            check_expr(rhs, lhs.type);
        } else if (!is_literal(rhs)) {
            check_expr(rhs, hint);
            check_expr(lhs, rhs.type);
        } else {
            check_expr(lhs, hint);
            check_expr(rhs, lhs.type);
        }
        if (want_int && !lhs.type->is_int())
            fail(pos, "operands must be integers");
        if (!want_int) {
            const TypeExpr& t = *lhs.type;
            if (!t.is_int() && !t.is_bool() && t.kind != TypeExpr::Kind::Enum)
                fail(pos, "equality is defined on scalar flows only");
        }
        if (!same_type(*lhs.type, *rhs.type))
            fail(pos, "operand types differ: " + type_to_string(*lhs.type) + " vs " +
                          type_to_string(*rhs.type));
    }

    void require(const Expr& e, const TypePtr& expected) {
        if (expected && !same_type(*e.type, *expected))
            fail(e.pos, "expected " + type_to_string(*expected) + ", got " +
                            type_to_string(*e.type));
    }
};

} // namespace

const NodeDecl& TypedProgram::node(const std::string& name) const {
    const NodeDecl* n = program.find_node(name);
    if (!n)
        throw EvalError(EvalErrorKind::Internal, "no node named " + name);
    return *n;
}

const NodeInfo& TypedProgram::info(const std::string& name) const {
    auto it = node_info.find(name);
    if (it == node_info.end())
        throw EvalError(EvalErrorKind::Internal, "no node named " + name);
    return it->second;
}

TypedProgram typecheck(ScadeProgram program) {
    return Checker(std::move(program)).run();
}

Value default_value(const TypeExpr& type, const std::map<std::string, int>& enum_member_index) {
    switch (type.kind) {
    case TypeExpr::Kind::Base: {
        if (type.base == BaseType::Bool)
            return Value::make_bool(false);
        long long lo, hi;
        base_type_range(type.base, lo, hi);
        long long v = (lo <= 0 && 0 <= hi) ? 0 : lo;
        return Value::make_int(v, lo, hi);
    }
    case TypeExpr::Kind::Enum:
        return Value::make_enum(type.name, type.members.at(0));
    case TypeExpr::Kind::Array: {
        std::vector<Value> cells((size_t)type.size, default_value(*type.elem, enum_member_index));
        return Value::make_array(std::move(cells));
    }
    case TypeExpr::Kind::Struct: {
        std::vector<std::pair<std::string, Value>> fields;
        for (const auto& [fname, ftype] : type.fields)
            fields.emplace_back(fname, default_value(*ftype, enum_member_index));
        return Value::make_record(std::move(fields));
    }
    case TypeExpr::Kind::Named:
        break;
    }
    throw EvalError(EvalErrorKind::Internal, "default over unresolved type");
}

Value coerce_value(Value v, const TypeExpr& type) {
    switch (type.kind) {
    case TypeExpr::Kind::Base: {
        if (type.base == BaseType::Bool) {
            if (v.kind() != Value::Kind::Bool)
                throw EvalError(EvalErrorKind::Range, "expected a boolean value");
            return v;
        }
        if (v.kind() != Value::Kind::Int)
            throw EvalError(EvalErrorKind::Range, "expected an integer value");
        long long lo, hi;
        base_type_range(type.base, lo, hi);
        long long x = v.as_int();
        if (x < lo || x > hi)
            throw EvalError(EvalErrorKind::Range,
                            "value " + std::to_string(x) + " outside " + std::to_string(lo) +
                                ".." + std::to_string(hi));
        return Value::make_int(x, lo, hi);
    }
    case TypeExpr::Kind::Enum: {
        if (v.kind() != Value::Kind::Enum)
            throw EvalError(EvalErrorKind::Range, "expected a member of " + type.name);
        bool found = false;
        for (const auto& m : type.members)
            found = found || m == v.enum_member();
        if (!found)
            throw EvalError(EvalErrorKind::Range,
                            "'" + v.enum_member() + "' is not a member of " + type.name);
        return Value::make_enum(type.name, v.enum_member());
    }
    case TypeExpr::Kind::Array: {
        if (v.kind() != Value::Kind::Array || (long long)v.cells().size() != type.size)
            throw EvalError(EvalErrorKind::Range,
                            "expected an array of length " + std::to_string(type.size));
        std::vector<Value> cells;
        cells.reserve(v.cells().size());
        for (auto& c : v.cells())
            cells.push_back(coerce_value(std::move(c), *type.elem));
        return Value::make_array(std::move(cells));
    }
    case TypeExpr::Kind::Struct: {
        if (v.kind() != Value::Kind::Record || v.fields().size() != type.fields.size())
            throw EvalError(EvalErrorKind::Range, "expected a " + type.name + " record");
        std::vector<std::pair<std::string, Value>> fields;
        for (size_t i = 0; i < type.fields.size(); ++i) {
            if (v.fields()[i].first != type.fields[i].first)
                throw EvalError(EvalErrorKind::Range,
                                "record field mismatch: " + v.fields()[i].first);
            fields.emplace_back(type.fields[i].first,
                                coerce_value(std::move(v.fields()[i].second),
                                             *type.fields[i].second));
        }
        return Value::make_record(std::move(fields));
    }
    case TypeExpr::Kind::Named:
        break;
    }
    throw EvalError(EvalErrorKind::Internal, "coercion against unresolved type");
}

} // namespace scb
