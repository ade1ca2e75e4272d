#include "scb/scade_print.hpp"

#include <sstream>

namespace scb {

namespace {

// Precedence levels for parenthesization, loosest first.
int prec(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::IfThenElse: return 0;
    case Expr::Kind::Binary:
        switch (e.binary_op) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        case BinaryOp::Eq: case BinaryOp::Ne:
        case BinaryOp::Lt: case BinaryOp::Le:
        case BinaryOp::Gt: case BinaryOp::Ge: return 4;
        case BinaryOp::Add: case BinaryOp::Sub: return 5;
        case BinaryOp::Mul: case BinaryOp::Div: case BinaryOp::Mod: return 6;
        }
        return 5;
    case Expr::Kind::Unary: return e.unary_op == UnaryOp::Not ? 3 : 7;
    default: return 9;
    }
}

void print_expr_prec(std::ostream& os, const Expr& e, int min_prec);

void print_sub(std::ostream& os, const Expr& e, int min_prec) {
    bool parens = prec(e) < min_prec;
    if (parens) os << "(";
    print_expr_prec(os, e, 0);
    if (parens) os << ")";
}

std::string type_text(const TypeExpr& t) {
    switch (t.kind) {
    case TypeExpr::Kind::Base: return base_type_name(t.base);
    case TypeExpr::Kind::Named: return t.name;
    case TypeExpr::Kind::Enum: {
        std::string out = "enum {";
        for (size_t i = 0; i < t.members.size(); ++i) {
            if (i) out += ", ";
            out += t.members[i];
        }
        return out + "}";
    }
    case TypeExpr::Kind::Array: {
        std::string size = t.size_name.empty() ? std::to_string(t.size) : t.size_name;
        return type_text(*t.elem) + "^" + size;
    }
    case TypeExpr::Kind::Struct: {
        std::string out = "{";
        for (size_t i = 0; i < t.fields.size(); ++i) {
            if (i) out += ", ";
            out += t.fields[i].first + ": " + type_text(*t.fields[i].second);
        }
        return out + "}";
    }
    }
    return "?";
}

void print_expr_prec(std::ostream& os, const Expr& e, int) {
    switch (e.kind) {
    case Expr::Kind::IntLit:
        os << e.int_val;
        return;
    case Expr::Kind::BoolLit:
        os << (e.bool_val ? "true" : "false");
        return;
    case Expr::Kind::VarRef:
    case Expr::Kind::EnumRef:
        os << e.name;
        return;
    case Expr::Kind::Unary:
        os << (e.unary_op == UnaryOp::Not ? "not " : "-");
        print_sub(os, *e.args[0], prec(e) + 1);
        return;
    case Expr::Kind::Binary: {
        int p = prec(e);
        print_sub(os, *e.args[0], p);
        os << " " << to_string(e.binary_op) << " ";
        // comparisons are non-associative; arithmetic is left-associative
        print_sub(os, *e.args[1], p + 1);
        return;
    }
    case Expr::Kind::IfThenElse:
        os << "if ";
        print_sub(os, *e.args[0], 1);
        os << " then ";
        print_sub(os, *e.args[1], 1);
        os << " else ";
        print_sub(os, *e.args[2], 0);
        return;
    case Expr::Kind::CaseOf: {
        os << "(case ";
        print_sub(os, *e.scrutinee, 1);
        os << " of";
        for (const auto& arm : e.case_arms) {
            os << " | ";
            if (arm.pattern)
                print_sub(os, *arm.pattern, 9);
            else
                os << "_";
            os << " : ";
            print_sub(os, *arm.value, 1);
        }
        os << ")";
        return;
    }
    case Expr::Kind::Fby:
        os << "fby(";
        print_sub(os, *e.fby_input, 0);
        os << "; " << (e.fby_depth_name.empty() ? std::to_string(e.fby_depth) : e.fby_depth_name)
           << "; ";
        print_sub(os, *e.fby_init, 9);
        os << ")";
        return;
    case Expr::Kind::StructMake: {
        os << "(make " << e.name << ")(";
        for (size_t i = 0; i < e.args.size(); ++i) {
            if (i) os << ", ";
            print_sub(os, *e.args[i], 0);
        }
        os << ")";
        return;
    }
    case Expr::Kind::FieldAccess:
        print_sub(os, *e.args[0], 9);
        os << "." << e.name;
        return;
    case Expr::Kind::ArrayIndex:
        print_sub(os, *e.args[0], 9);
        os << "[";
        print_sub(os, *e.args[1], 0);
        os << "]";
        return;
    case Expr::Kind::HigherOrder: {
        os << "(" << to_string(e.hof_variant) << " ";
        if (e.hof_acc_count > 0 &&
            (e.hof_variant == HofVariant::Mapfold || e.hof_variant == HofVariant::Mapfoldi ||
             e.hof_variant == HofVariant::Mapfoldw || e.hof_variant == HofVariant::Mapfoldwi))
            os << e.hof_acc_count << " ";
        os << e.hof_op << " <<"
           << (e.hof_size_name.empty() ? std::to_string(e.hof_size) : e.hof_size_name) << ">>";
        if (e.hof_init_cond) {
            os << " if ";
            print_sub(os, *e.hof_init_cond, 1);
        }
        if (!e.hof_defaults.empty()) {
            os << " default (";
            for (size_t i = 0; i < e.hof_defaults.size(); ++i) {
                if (i) os << ", ";
                print_sub(os, *e.hof_defaults[i], 0);
            }
            os << ")";
        }
        os << ")(";
        bool first = true;
        for (const auto& a : e.hof_acc_inits) {
            if (!first) os << ", ";
            first = false;
            print_sub(os, *a, 0);
        }
        for (const auto& a : e.hof_arrays) {
            if (!first) os << ", ";
            first = false;
            print_sub(os, *a, 0);
        }
        os << ")";
        return;
    }
    case Expr::Kind::Call:
        os << e.name << "(";
        for (size_t i = 0; i < e.args.size(); ++i) {
            if (i) os << ", ";
            print_sub(os, *e.args[i], 0);
        }
        os << ")";
        return;
    }
}

void print_items(std::ostream& os, const std::vector<BodyItemPtr>& items, int indent);

void print_block(std::ostream& os, const std::vector<VarDecl>& locals,
                 const std::vector<BodyItemPtr>& items, int indent) {
    std::string pad(indent * 2, ' ');
    if (!locals.empty()) {
        os << pad << "var\n";
        for (const auto& v : locals)
            os << pad << "  " << v.name << ": " << type_text(*v.type) << ";\n";
    }
    os << pad << "let\n";
    print_items(os, items, indent + 1);
    os << pad << "tel\n";
}

void print_items(std::ostream& os, const std::vector<BodyItemPtr>& items, int indent) {
    std::string pad(indent * 2, ' ');
    for (const auto& item : items) {
        switch (item->kind) {
        case BodyItem::Kind::Equation: {
            os << pad;
            const auto& eq = item->equation;
            for (size_t i = 0; i < eq.lhs.size(); ++i) {
                if (i) os << ", ";
                os << eq.lhs[i];
            }
            os << " = ";
            print_expr_prec(os, *eq.rhs, 0);
            os << ";\n";
            break;
        }
        case BodyItem::Kind::ActivateIf: {
            const auto& a = item->activate;
            os << pad << "activate " << a.name << "\n" << pad << "if (";
            print_expr_prec(os, *a.condition, 0);
            os << ") then\n";
            if (a.then_items.size() == 1 && a.then_items[0]->kind == BodyItem::Kind::ActivateIf &&
                a.then_locals.empty())
                print_items(os, a.then_items, indent + 1);
            else
                print_block(os, a.then_locals, a.then_items, indent + 1);
            os << pad << "else\n";
            if (a.else_items.size() == 1 && a.else_items[0]->kind == BodyItem::Kind::ActivateIf &&
                a.else_locals.empty())
                print_items(os, a.else_items, indent + 1);
            else
                print_block(os, a.else_locals, a.else_items, indent + 1);
            os << pad << "returns .. ;\n";
            break;
        }
        case BodyItem::Kind::StateMachine: {
            const auto& m = item->machine;
            os << pad << "automaton " << m.name << "\n";
            for (const auto& s : m.states) {
                os << pad << "  " << (s.is_initial ? "initial " : "") << "state " << s.name << "\n";
                if (!s.transitions.empty()) {
                    os << pad << "  unless\n";
                    for (const auto& t : s.transitions) {
                        os << pad << "    if ";
                        print_expr_prec(os, *t.condition, 0);
                        os << "\n" << pad << "      restart " << t.target << ";\n";
                    }
                }
                if (!s.body.empty() || !s.locals.empty())
                    print_block(os, s.locals, s.body, indent + 1);
            }
            os << pad << "returns .. ;\n";
            break;
        }
        }
    }
}

} // namespace

std::string print_program(const ScadeProgram& p) {
    std::ostringstream os;
    for (const auto& pr : p.pragmas)
        os << "--@" << pr.key << (pr.value.empty() ? "" : " " + pr.value) << "\n";
    if (!p.pragmas.empty())
        os << "\n";
    if (!p.consts.empty()) {
        os << "const";
        for (const auto& c : p.consts) {
            os << "\n  " << c.name << ": " << type_text(*c.type) << " = ";
            print_expr_prec(os, *c.value, 0);
            os << ";";
        }
        os << "\n\n";
    }
    if (!p.types.empty()) {
        os << "type";
        for (const auto& t : p.types)
            os << "\n  " << t.name << " = " << type_text(*t.type) << ";";
        os << "\n\n";
    }
    for (const auto& n : p.nodes) {
        os << (n.is_function ? "function " : "node ") << n.name << "(";
        for (size_t i = 0; i < n.inputs.size(); ++i) {
            if (i) os << "; ";
            os << n.inputs[i].name << ": " << type_text(*n.inputs[i].type);
        }
        os << ")\n  returns (";
        for (size_t i = 0; i < n.outputs.size(); ++i) {
            if (i) os << "; ";
            os << n.outputs[i].name << ": " << type_text(*n.outputs[i].type);
        }
        os << ")";
        if (n.body.empty() && n.locals.empty()) {
            os << ";\n\n";
            continue;
        }
        os << "\n";
        if (!n.locals.empty()) {
            os << "var\n";
            for (const auto& v : n.locals)
                os << "  " << v.name << ": " << type_text(*v.type) << ";\n";
        }
        os << "let\n";
        print_items(os, n.body, 1);
        os << "tel\n\n";
    }
    return os.str();
}

std::string print_expr(const Expr& expr) {
    std::ostringstream os;
    print_expr_prec(os, expr, 0);
    return os.str();
}

namespace {

bool type_equal(const TypeExpr& a, const TypeExpr& b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case TypeExpr::Kind::Base: return a.base == b.base;
    case TypeExpr::Kind::Named: return a.name == b.name;
    case TypeExpr::Kind::Enum: return a.name == b.name && a.members == b.members;
    case TypeExpr::Kind::Array:
        return a.size == b.size && a.size_name == b.size_name && type_equal(*a.elem, *b.elem);
    case TypeExpr::Kind::Struct:
        if (a.fields.size() != b.fields.size())
            return false;
        for (size_t i = 0; i < a.fields.size(); ++i)
            if (a.fields[i].first != b.fields[i].first ||
                !type_equal(*a.fields[i].second, *b.fields[i].second))
                return false;
        return true;
    }
    return false;
}

bool expr_equal(const Expr& a, const Expr& b);

bool expr_list_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!expr_equal(*a[i], *b[i]))
            return false;
    return true;
}

bool expr_equal(const Expr& a, const Expr& b) {
    // EnumRef is the typechecked form of a bare VarRef; fold the two together
    auto norm = [](Expr::Kind k) {
        return k == Expr::Kind::EnumRef ? Expr::Kind::VarRef : k;
    };
    if (norm(a.kind) != norm(b.kind))
        return false;
    switch (norm(a.kind)) {
    case Expr::Kind::IntLit: return a.int_val == b.int_val;
    case Expr::Kind::BoolLit: return a.bool_val == b.bool_val;
    case Expr::Kind::VarRef: return a.name == b.name;
    case Expr::Kind::Unary:
        return a.unary_op == b.unary_op && expr_list_equal(a.args, b.args);
    case Expr::Kind::Binary:
        return a.binary_op == b.binary_op && expr_list_equal(a.args, b.args);
    case Expr::Kind::IfThenElse:
        return expr_list_equal(a.args, b.args);
    case Expr::Kind::CaseOf: {
        if (!expr_equal(*a.scrutinee, *b.scrutinee) || a.case_arms.size() != b.case_arms.size())
            return false;
        for (size_t i = 0; i < a.case_arms.size(); ++i) {
            const auto& x = a.case_arms[i];
            const auto& y = b.case_arms[i];
            if ((x.pattern == nullptr) != (y.pattern == nullptr))
                return false;
            if (x.pattern && !expr_equal(*x.pattern, *y.pattern))
                return false;
            if (!expr_equal(*x.value, *y.value))
                return false;
        }
        return true;
    }
    case Expr::Kind::Fby:
        return expr_equal(*a.fby_input, *b.fby_input) && a.fby_depth == b.fby_depth &&
               a.fby_depth_name == b.fby_depth_name && expr_equal(*a.fby_init, *b.fby_init);
    case Expr::Kind::StructMake:
        return a.name == b.name && expr_list_equal(a.args, b.args);
    case Expr::Kind::FieldAccess:
        return a.name == b.name && expr_list_equal(a.args, b.args);
    case Expr::Kind::ArrayIndex:
        return expr_list_equal(a.args, b.args);
    case Expr::Kind::HigherOrder: {
        if (a.hof_variant != b.hof_variant || a.hof_op != b.hof_op ||
            a.hof_size != b.hof_size || a.hof_size_name != b.hof_size_name ||
            a.hof_acc_count != b.hof_acc_count)
            return false;
        if ((a.hof_init_cond == nullptr) != (b.hof_init_cond == nullptr))
            return false;
        if (a.hof_init_cond && !expr_equal(*a.hof_init_cond, *b.hof_init_cond))
            return false;
        // acc seeds may or may not have been split off hof_arrays yet; compare
        // the concatenation either way
        std::vector<const Expr*> av, bv;
        for (const auto& x : a.hof_acc_inits) av.push_back(x.get());
        for (const auto& x : a.hof_arrays) av.push_back(x.get());
        for (const auto& x : b.hof_acc_inits) bv.push_back(x.get());
        for (const auto& x : b.hof_arrays) bv.push_back(x.get());
        if (av.size() != bv.size() || a.hof_defaults.size() != b.hof_defaults.size())
            return false;
        for (size_t i = 0; i < av.size(); ++i)
            if (!expr_equal(*av[i], *bv[i]))
                return false;
        for (size_t i = 0; i < a.hof_defaults.size(); ++i)
            if (!expr_equal(*a.hof_defaults[i], *b.hof_defaults[i]))
                return false;
        return true;
    }
    case Expr::Kind::Call:
        return a.name == b.name && expr_list_equal(a.args, b.args);
    default:
        return false;
    }
}

bool decls_equal(const std::vector<VarDecl>& a, const std::vector<VarDecl>& b) {
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].name != b[i].name || !type_equal(*a[i].type, *b[i].type))
            return false;
    return true;
}

bool items_equal(const std::vector<BodyItemPtr>& a, const std::vector<BodyItemPtr>& b);

bool item_equal(const BodyItem& a, const BodyItem& b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case BodyItem::Kind::Equation:
        return a.equation.lhs == b.equation.lhs && expr_equal(*a.equation.rhs, *b.equation.rhs);
    case BodyItem::Kind::ActivateIf:
        return a.activate.name == b.activate.name &&
               expr_equal(*a.activate.condition, *b.activate.condition) &&
               decls_equal(a.activate.then_locals, b.activate.then_locals) &&
               items_equal(a.activate.then_items, b.activate.then_items) &&
               decls_equal(a.activate.else_locals, b.activate.else_locals) &&
               items_equal(a.activate.else_items, b.activate.else_items);
    case BodyItem::Kind::StateMachine: {
        const auto& x = a.machine;
        const auto& y = b.machine;
        if (x.name != y.name || x.states.size() != y.states.size())
            return false;
        for (size_t i = 0; i < x.states.size(); ++i) {
            const auto& s = x.states[i];
            const auto& t = y.states[i];
            if (s.name != t.name || s.is_initial != t.is_initial ||
                s.transitions.size() != t.transitions.size())
                return false;
            for (size_t j = 0; j < s.transitions.size(); ++j)
                if (s.transitions[j].target != t.transitions[j].target ||
                    !expr_equal(*s.transitions[j].condition, *t.transitions[j].condition))
                    return false;
            if (!decls_equal(s.locals, t.locals) || !items_equal(s.body, t.body))
                return false;
        }
        return true;
    }
    }
    return false;
}

bool items_equal(const std::vector<BodyItemPtr>& a, const std::vector<BodyItemPtr>& b) {
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!item_equal(*a[i], *b[i]))
            return false;
    return true;
}

} // namespace

bool ast_equal(const Expr& a, const Expr& b) { return expr_equal(a, b); }

bool ast_equal(const ScadeProgram& a, const ScadeProgram& b) {
    if (a.types.size() != b.types.size() || a.consts.size() != b.consts.size() ||
        a.nodes.size() != b.nodes.size() || a.pragmas.size() != b.pragmas.size())
        return false;
    for (size_t i = 0; i < a.pragmas.size(); ++i)
        if (a.pragmas[i].key != b.pragmas[i].key || a.pragmas[i].value != b.pragmas[i].value)
            return false;
    for (size_t i = 0; i < a.types.size(); ++i)
        if (a.types[i].name != b.types[i].name || !type_equal(*a.types[i].type, *b.types[i].type))
            return false;
    for (size_t i = 0; i < a.consts.size(); ++i)
        if (a.consts[i].name != b.consts[i].name ||
            !type_equal(*a.consts[i].type, *b.consts[i].type) ||
            !expr_equal(*a.consts[i].value, *b.consts[i].value))
            return false;
    for (size_t i = 0; i < a.nodes.size(); ++i) {
        const auto& x = a.nodes[i];
        const auto& y = b.nodes[i];
        if (x.name != y.name || x.is_function != y.is_function)
            return false;
        if (!decls_equal(x.inputs, y.inputs) || !decls_equal(x.outputs, y.outputs) ||
            !decls_equal(x.locals, y.locals))
            return false;
        if (!items_equal(x.body, y.body))
            return false;
    }
    return true;
}

} // namespace scb
