#pragma once

#include "scb/diag.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scb {

enum class BaseType { UInt8, UInt16, UInt32, Int8, Int16, Int32, Bool };

bool base_type_range(BaseType t, long long& lo, long long& hi);
const char* base_type_name(BaseType t);            // source spelling: uint8, ...
const char* base_type_b_name(BaseType t);          // emitted spelling: uint8_t, ...
std::optional<BaseType> base_type_from_name(const std::string& name);

struct TypeExpr;
using TypePtr = std::shared_ptr<TypeExpr>;

/// Type expression. Parsed form may contain Named references and symbolic
/// array sizes; the typechecker rewrites everything to a resolved form
/// (Named eliminated, array sizes concrete).
struct TypeExpr {
    enum class Kind { Base, Named, Enum, Array, Struct };

    Kind kind = Kind::Base;
    BaseType base = BaseType::Int32;
    std::string name;                                   // Named; Enum/Struct: declared name
    std::vector<std::string> members;                   // Enum
    TypePtr elem;                                       // Array
    long long size = 0;                                 // Array, resolved
    std::string size_name;                              // Array, symbolic size before resolution
    std::vector<std::pair<std::string, TypePtr>> fields; // Struct
    SourcePos pos;

    bool is_bool() const { return kind == Kind::Base && base == BaseType::Bool; }
    bool is_int() const { return kind == Kind::Base && base != BaseType::Bool; }
};

// Structural equality on resolved types.
bool same_type(const TypeExpr& a, const TypeExpr& b);
std::string type_to_string(const TypeExpr& t);

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

const char* to_string(BinaryOp op);

enum class HofVariant {
    Map, Mapi, Mapw, Mapwi,
    Fold, Foldi, Foldw, Foldwi,
    Mapfold, Mapfoldi, Mapfoldw, Mapfoldwi,
};

const char* to_string(HofVariant v);
std::optional<HofVariant> hof_variant_from_name(const std::string& name);
bool hof_is_indexed(HofVariant v);   // *i family: op takes the index first
bool hof_is_while(HofVariant v);     // *w family: op emits a continuation flag first
bool hof_has_acc(HofVariant v);      // fold/mapfold families
bool hof_has_values(HofVariant v);   // families producing per-cell outputs

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct CaseArm {
    ExprPtr pattern; // literal or enum member; null for the default `_` arm
    ExprPtr value;
};

struct Expr {
    enum class Kind {
        IntLit, BoolLit, VarRef, EnumRef,
        Unary, Binary, IfThenElse, CaseOf,
        Fby, StructMake, FieldAccess, ArrayIndex,
        HigherOrder, Call,
    };

    Kind kind = Kind::IntLit;
    SourcePos pos;

    long long int_val = 0;
    bool bool_val = false;
    std::string name;           // VarRef/EnumRef ident, StructMake type, field name, Call target
    UnaryOp unary_op = UnaryOp::Neg;
    BinaryOp binary_op = BinaryOp::Add;
    std::vector<ExprPtr> args;  // operands / condition+branches / call args / struct fields

    // CaseOf
    ExprPtr scrutinee;
    std::vector<CaseArm> case_arms;

    // Fby
    ExprPtr fby_input;
    long long fby_depth = 0;
    std::string fby_depth_name;  // symbolic depth before resolution
    ExprPtr fby_init;
    int fby_id = -1;             // assigned by the typechecker, stable instance id

    // HigherOrder
    HofVariant hof_variant = HofVariant::Map;
    std::string hof_op;
    long long hof_size = 0;
    std::string hof_size_name;
    int hof_acc_count = 0;
    ExprPtr hof_init_cond;
    std::vector<ExprPtr> hof_defaults;
    std::vector<ExprPtr> hof_acc_inits;
    std::vector<ExprPtr> hof_arrays;
    int hof_id = -1;
    bool hof_binds_control = false; // left-hand side also binds idx (and cond)

    // filled by the typechecker
    TypePtr type;

    ExprPtr clone() const;
};

ExprPtr make_int_lit(long long v, SourcePos pos = {});
ExprPtr make_bool_lit(bool v, SourcePos pos = {});
ExprPtr make_var_ref(std::string name, SourcePos pos = {});

struct VarDecl {
    std::string name;
    TypePtr type;
    SourcePos pos;
};

struct BodyItem;

struct Equation {
    std::vector<std::string> lhs;
    ExprPtr rhs;
    SourcePos pos;
};

struct ActivateIf {
    std::string name;
    ExprPtr condition;
    std::vector<VarDecl> then_locals;
    std::vector<std::unique_ptr<BodyItem>> then_items;
    std::vector<VarDecl> else_locals;
    std::vector<std::unique_ptr<BodyItem>> else_items;
};

struct Transition {
    ExprPtr condition;
    std::string target;
    SourcePos pos;
};

struct StateDecl {
    std::string name;
    bool is_initial = false;
    std::vector<Transition> transitions; // order is firing order
    std::vector<VarDecl> locals;
    std::vector<std::unique_ptr<BodyItem>> body;
    SourcePos pos;
};

struct StateMachine {
    std::string name;
    std::vector<StateDecl> states;
    SourcePos pos;

    const StateDecl* initial_state() const;
    const StateDecl* find_state(const std::string& name) const;
};

struct BodyItem {
    enum class Kind { Equation, ActivateIf, StateMachine };
    Kind kind = Kind::Equation;
    Equation equation;
    ActivateIf activate;
    StateMachine machine;
    SourcePos pos;
};

using BodyItemPtr = std::unique_ptr<BodyItem>;

struct NodeDecl {
    std::string name;
    bool is_function = false; // `function`: stateless, usable as an iterator op
    std::vector<VarDecl> inputs;
    std::vector<VarDecl> outputs;
    std::vector<VarDecl> locals;
    std::vector<BodyItemPtr> body;
    SourcePos pos;

    const VarDecl* find_var(const std::string& name) const;
};

struct TypeDecl {
    std::string name;
    TypePtr type;
    SourcePos pos;
};

struct ConstDecl {
    std::string name;
    TypePtr type;
    ExprPtr value;
    SourcePos pos;
};

/// `--@key value` pragma line. Recognized keys: machine, state_var, invariant.
struct Pragma {
    std::string key;
    std::string value;
    SourcePos pos;
};

struct ScadeProgram {
    std::vector<TypeDecl> types;
    std::vector<ConstDecl> consts;
    std::vector<NodeDecl> nodes;
    std::vector<Pragma> pragmas;

    const NodeDecl* find_node(const std::string& name) const;
    const TypeDecl* find_type(const std::string& name) const;
    const ConstDecl* find_const(const std::string& name) const;
    std::optional<std::string> pragma_value(const std::string& key) const;
};

BodyItemPtr clone_item(const BodyItem& item);
std::vector<BodyItemPtr> clone_items(const std::vector<BodyItemPtr>& items);

} // namespace scb
