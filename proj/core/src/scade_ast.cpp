#include "scb/scade_ast.hpp"

namespace scb {

bool base_type_range(BaseType t, long long& lo, long long& hi) {
    switch (t) {
    case BaseType::UInt8: lo = 0; hi = 0xFF; return true;
    case BaseType::UInt16: lo = 0; hi = 0xFFFF; return true;
    case BaseType::UInt32: lo = 0; hi = 0xFFFFFFFFLL; return true;
    case BaseType::Int8: lo = -128; hi = 127; return true;
    case BaseType::Int16: lo = -32768; hi = 32767; return true;
    case BaseType::Int32: lo = -2147483648LL; hi = 2147483647LL; return true;
    case BaseType::Bool: return false;
    }
    return false;
}

const char* base_type_name(BaseType t) {
    switch (t) {
    case BaseType::UInt8: return "uint8";
    case BaseType::UInt16: return "uint16";
    case BaseType::UInt32: return "uint32";
    case BaseType::Int8: return "int8";
    case BaseType::Int16: return "int16";
    case BaseType::Int32: return "int32";
    case BaseType::Bool: return "bool";
    }
    return "?";
}

const char* base_type_b_name(BaseType t) {
    switch (t) {
    case BaseType::UInt8: return "uint8_t";
    case BaseType::UInt16: return "uint16_t";
    case BaseType::UInt32: return "uint32_t";
    case BaseType::Int8: return "int8_t";
    case BaseType::Int16: return "int16_t";
    case BaseType::Int32: return "int32_t";
    case BaseType::Bool: return "BOOL";
    }
    return "?";
}

std::optional<BaseType> base_type_from_name(const std::string& name) {
    if (name == "uint8") return BaseType::UInt8;
    if (name == "uint16") return BaseType::UInt16;
    if (name == "uint32") return BaseType::UInt32;
    if (name == "int8") return BaseType::Int8;
    if (name == "int16") return BaseType::Int16;
    if (name == "int32") return BaseType::Int32;
    if (name == "bool") return BaseType::Bool;
    return std::nullopt;
}

bool same_type(const TypeExpr& a, const TypeExpr& b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case TypeExpr::Kind::Base:
        return a.base == b.base;
    case TypeExpr::Kind::Named:
        return a.name == b.name;
    case TypeExpr::Kind::Enum:
        return a.name == b.name;
    case TypeExpr::Kind::Array:
        return a.size == b.size && same_type(*a.elem, *b.elem);
    case TypeExpr::Kind::Struct:
        if (a.name != b.name || a.fields.size() != b.fields.size())
            return false;
        for (size_t i = 0; i < a.fields.size(); ++i)
            if (a.fields[i].first != b.fields[i].first ||
                !same_type(*a.fields[i].second, *b.fields[i].second))
                return false;
        return true;
    }
    return false;
}

std::string type_to_string(const TypeExpr& t) {
    switch (t.kind) {
    case TypeExpr::Kind::Base:
        return base_type_name(t.base);
    case TypeExpr::Kind::Named:
        return t.name;
    case TypeExpr::Kind::Enum:
        return t.name.empty() ? "enum" : t.name;
    case TypeExpr::Kind::Array:
        return type_to_string(*t.elem) + "^" + std::to_string(t.size);
    case TypeExpr::Kind::Struct:
        return t.name.empty() ? "struct" : t.name;
    }
    return "?";
}

const char* to_string(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "mod";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    }
    return "?";
}

const char* to_string(HofVariant v) {
    switch (v) {
    case HofVariant::Map: return "map";
    case HofVariant::Mapi: return "mapi";
    case HofVariant::Mapw: return "mapw";
    case HofVariant::Mapwi: return "mapwi";
    case HofVariant::Fold: return "fold";
    case HofVariant::Foldi: return "foldi";
    case HofVariant::Foldw: return "foldw";
    case HofVariant::Foldwi: return "foldwi";
    case HofVariant::Mapfold: return "mapfold";
    case HofVariant::Mapfoldi: return "mapfoldi";
    case HofVariant::Mapfoldw: return "mapfoldw";
    case HofVariant::Mapfoldwi: return "mapfoldwi";
    }
    return "?";
}

std::optional<HofVariant> hof_variant_from_name(const std::string& name) {
    static const std::pair<const char*, HofVariant> table[] = {
        {"map", HofVariant::Map}, {"mapi", HofVariant::Mapi},
        {"mapw", HofVariant::Mapw}, {"mapwi", HofVariant::Mapwi},
        {"fold", HofVariant::Fold}, {"foldi", HofVariant::Foldi},
        {"foldw", HofVariant::Foldw}, {"foldwi", HofVariant::Foldwi},
        {"mapfold", HofVariant::Mapfold}, {"mapfoldi", HofVariant::Mapfoldi},
        {"mapfoldw", HofVariant::Mapfoldw}, {"mapfoldwi", HofVariant::Mapfoldwi},
    };
    for (const auto& [n, v] : table)
        if (name == n)
            return v;
    return std::nullopt;
}

bool hof_is_indexed(HofVariant v) {
    switch (v) {
    case HofVariant::Mapi: case HofVariant::Mapwi:
    case HofVariant::Foldi: case HofVariant::Foldwi:
    case HofVariant::Mapfoldi: case HofVariant::Mapfoldwi:
        return true;
    default:
        return false;
    }
}

bool hof_is_while(HofVariant v) {
    switch (v) {
    case HofVariant::Mapw: case HofVariant::Mapwi:
    case HofVariant::Foldw: case HofVariant::Foldwi:
    case HofVariant::Mapfoldw: case HofVariant::Mapfoldwi:
        return true;
    default:
        return false;
    }
}

bool hof_has_acc(HofVariant v) {
    switch (v) {
    case HofVariant::Fold: case HofVariant::Foldi:
    case HofVariant::Foldw: case HofVariant::Foldwi:
    case HofVariant::Mapfold: case HofVariant::Mapfoldi:
    case HofVariant::Mapfoldw: case HofVariant::Mapfoldwi:
        return true;
    default:
        return false;
    }
}

bool hof_has_values(HofVariant v) {
    switch (v) {
    case HofVariant::Fold: case HofVariant::Foldi:
    case HofVariant::Foldw: case HofVariant::Foldwi:
        return false;
    default:
        return true;
    }
}

ExprPtr Expr::clone() const {
    auto out = std::make_unique<Expr>();
    out->kind = kind;
    out->pos = pos;
    out->int_val = int_val;
    out->bool_val = bool_val;
    out->name = name;
    out->unary_op = unary_op;
    out->binary_op = binary_op;
    for (const auto& a : args)
        out->args.push_back(a->clone());
    if (scrutinee)
        out->scrutinee = scrutinee->clone();
    for (const auto& arm : case_arms) {
        CaseArm copy;
        if (arm.pattern)
            copy.pattern = arm.pattern->clone();
        copy.value = arm.value->clone();
        out->case_arms.push_back(std::move(copy));
    }
    if (fby_input)
        out->fby_input = fby_input->clone();
    out->fby_depth = fby_depth;
    out->fby_depth_name = fby_depth_name;
    if (fby_init)
        out->fby_init = fby_init->clone();
    out->fby_id = fby_id;
    out->hof_variant = hof_variant;
    out->hof_op = hof_op;
    out->hof_size = hof_size;
    out->hof_size_name = hof_size_name;
    out->hof_acc_count = hof_acc_count;
    if (hof_init_cond)
        out->hof_init_cond = hof_init_cond->clone();
    for (const auto& d : hof_defaults)
        out->hof_defaults.push_back(d->clone());
    for (const auto& a : hof_acc_inits)
        out->hof_acc_inits.push_back(a->clone());
    for (const auto& a : hof_arrays)
        out->hof_arrays.push_back(a->clone());
    out->hof_id = hof_id;
    out->hof_binds_control = hof_binds_control;
    out->type = type;
    return out;
}

ExprPtr make_int_lit(long long v, SourcePos pos) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::IntLit;
    e->int_val = v;
    e->pos = pos;
    return e;
}

ExprPtr make_bool_lit(bool v, SourcePos pos) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::BoolLit;
    e->bool_val = v;
    e->pos = pos;
    return e;
}

ExprPtr make_var_ref(std::string name, SourcePos pos) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::VarRef;
    e->name = std::move(name);
    e->pos = pos;
    return e;
}

const StateDecl* StateMachine::initial_state() const {
    for (const auto& s : states)
        if (s.is_initial)
            return &s;
    return nullptr;
}

const StateDecl* StateMachine::find_state(const std::string& sname) const {
    for (const auto& s : states)
        if (s.name == sname)
            return &s;
    return nullptr;
}

const VarDecl* NodeDecl::find_var(const std::string& vname) const {
    for (const auto& v : inputs)
        if (v.name == vname) return &v;
    for (const auto& v : outputs)
        if (v.name == vname) return &v;
    for (const auto& v : locals)
        if (v.name == vname) return &v;
    return nullptr;
}

const NodeDecl* ScadeProgram::find_node(const std::string& name) const {
    for (const auto& n : nodes)
        if (n.name == name)
            return &n;
    return nullptr;
}

const TypeDecl* ScadeProgram::find_type(const std::string& name) const {
    for (const auto& t : types)
        if (t.name == name)
            return &t;
    return nullptr;
}

const ConstDecl* ScadeProgram::find_const(const std::string& name) const {
    for (const auto& c : consts)
        if (c.name == name)
            return &c;
    return nullptr;
}

std::optional<std::string> ScadeProgram::pragma_value(const std::string& key) const {
    for (const auto& p : pragmas)
        if (p.key == key)
            return p.value;
    return std::nullopt;
}

BodyItemPtr clone_item(const BodyItem& item) {
    auto out = std::make_unique<BodyItem>();
    out->kind = item.kind;
    out->pos = item.pos;
    switch (item.kind) {
    case BodyItem::Kind::Equation:
        out->equation.lhs = item.equation.lhs;
        out->equation.rhs = item.equation.rhs->clone();
        out->equation.pos = item.equation.pos;
        break;
    case BodyItem::Kind::ActivateIf: {
        const auto& a = item.activate;
        out->activate.name = a.name;
        out->activate.condition = a.condition->clone();
        out->activate.then_locals = a.then_locals;
        out->activate.then_items = clone_items(a.then_items);
        out->activate.else_locals = a.else_locals;
        out->activate.else_items = clone_items(a.else_items);
        break;
    }
    case BodyItem::Kind::StateMachine: {
        const auto& m = item.machine;
        out->machine.name = m.name;
        out->machine.pos = m.pos;
        for (const auto& s : m.states) {
            StateDecl copy;
            copy.name = s.name;
            copy.is_initial = s.is_initial;
            copy.pos = s.pos;
            for (const auto& t : s.transitions) {
                Transition tc;
                tc.condition = t.condition->clone();
                tc.target = t.target;
                tc.pos = t.pos;
                copy.transitions.push_back(std::move(tc));
            }
            copy.locals = s.locals;
            copy.body = clone_items(s.body);
            out->machine.states.push_back(std::move(copy));
        }
        break;
    }
    }
    return out;
}

std::vector<BodyItemPtr> clone_items(const std::vector<BodyItemPtr>& items) {
    std::vector<BodyItemPtr> out;
    out.reserve(items.size());
    for (const auto& item : items)
        out.push_back(clone_item(*item));
    return out;
}

} // namespace scb
