#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scb {

// Abstract machine AST for the translated subset: flat machines with
// enumerated sets, interval-typed constants, and loop-annotated WHILE
// substitutions.

struct BExpr;
using BExprPtr = std::unique_ptr<BExpr>;
struct BPred;
using BPredPtr = std::unique_ptr<BPred>;

enum class BBinOp { Add, Sub, Mul, Div, Mod };

struct BExpr {
    enum class Kind {
        IntLit, BoolLit, Ref,
        Binary, Neg,
        Apply,      // f(i): array cell read
        Interval,   // a..b
        MapletSet,  // {0 |-> e0, 1 |-> e1, ...}
        ConstFun,   // (a..b)*{v}
        Record,     // rec(f1: e1, ...)
        Field,      // r'f
        BoolOf,     // bool(P): predicate reified as a BOOL value
    };

    BExpr();
    ~BExpr();
    BExpr(BExpr&&) noexcept;
    BExpr& operator=(BExpr&&) noexcept;

    Kind kind = Kind::IntLit;
    long long int_val = 0;
    bool bool_val = false;
    std::string name; // Ref ident, Apply function, Field name
    BBinOp op = BBinOp::Add;
    std::vector<BExprPtr> args; // Binary [l,r]; Neg [x]; Apply [i]; Interval [lo,hi];
                                // ConstFun [lo,hi,v]; Field [record]
    std::vector<std::pair<BExprPtr, BExprPtr>> maplets;
    std::vector<std::pair<std::string, BExprPtr>> fields;
    BPredPtr bool_pred; // BoolOf

    BExprPtr clone() const;
};

BExprPtr b_int(long long v);
BExprPtr b_bool(bool v);
BExprPtr b_ref(std::string name);
BExprPtr b_binary(BBinOp op, BExprPtr l, BExprPtr r);
BExprPtr b_apply(std::string fn, BExprPtr index);
BExprPtr b_interval(BExprPtr lo, BExprPtr hi);
BExprPtr b_bool_of(BPredPtr pred);

/// Typing domain on the right of `:` — a named set, an interval, a total
/// function, or a record set.
struct BDomain {
    enum class Kind { Name, Interval, TotalFun, StructSet };
    Kind kind = Kind::Name;
    std::string name;
    BExprPtr lo, hi;
    std::unique_ptr<BDomain> from, to;
    std::vector<std::pair<std::string, std::unique_ptr<BDomain>>> fields;

    std::unique_ptr<BDomain> clone() const;
};
using BDomainPtr = std::unique_ptr<BDomain>;

BDomainPtr b_domain_name(std::string name);
BDomainPtr b_domain_interval(BExprPtr lo, BExprPtr hi);
BDomainPtr b_domain_fun(BDomainPtr from, BDomainPtr to);

enum class BCmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct BPred {
    enum class Kind { And, Or, Not, Implies, Compare, Member, Forall };
    Kind kind = Kind::Compare;
    std::vector<BPredPtr> preds; // And/Or/Implies [a,b]; Not [a]
    BCmpOp cmp = BCmpOp::Eq;
    BExprPtr lhs, rhs;  // Compare
    BExprPtr elem;      // Member
    BDomainPtr domain;  // Member
    // Forall: !var.((var : lo..hi [& guard]) => body)
    std::string var;
    BExprPtr lo, hi;
    BPredPtr guard;
    BPredPtr body;

    BPredPtr clone() const;
};

BPredPtr b_and(BPredPtr a, BPredPtr b);
BPredPtr b_implies(BPredPtr a, BPredPtr b);
BPredPtr b_not(BPredPtr a);
BPredPtr b_compare(BCmpOp op, BExprPtr l, BExprPtr r);
BPredPtr b_member(BExprPtr elem, BDomainPtr domain);

struct BSubst;
using BSubstPtr = std::unique_ptr<BSubst>;

/// Assignment target: `x`, one cell `f(i)`, or one field `r'f`.
struct BLValue {
    std::string name;
    BExprPtr index;    // non-null for f(i) := e
    std::string field; // non-empty for r'f := e

    BLValue clone() const;
};

struct BSubst {
    enum class Kind { Assign, If, Case, While, Var, Seq, Parallel, Skip, OpCall };

    struct IfBranch {
        BPredPtr cond;
        BSubstPtr body;
    };
    struct CaseArm {
        std::vector<BExprPtr> labels;
        BSubstPtr body;
    };

    Kind kind = Kind::Skip;
    // Assign: parallel multiple assignment, all rhs read the pre-state
    std::vector<BLValue> lvalues;
    std::vector<BExprPtr> exprs;
    // If / Case
    std::vector<IfBranch> branches;
    BExprPtr scrutinee;
    std::vector<CaseArm> arms;
    BSubstPtr else_sub;
    // While
    BPredPtr while_cond;
    BSubstPtr while_body;
    BPredPtr invariant; // required; optional in the AST so the validator can flag it
    BExprPtr variant;
    // Var
    std::vector<std::string> var_names;
    BSubstPtr var_body;
    // Seq / Parallel
    std::vector<BSubstPtr> subs;
    // OpCall: outs <-- op(args)
    std::vector<std::string> call_outputs;
    std::string call_op;
    std::vector<BExprPtr> call_args;
};

BSubstPtr b_assign(BLValue lv, BExprPtr e);
BSubstPtr b_assign_var(std::string name, BExprPtr e);
BSubstPtr b_skip();
BSubstPtr b_seq(std::vector<BSubstPtr> subs);

struct BProperty {
    std::string name;
    BExprPtr value;   // MAX_SIZE = 5
    BDomainPtr domain; // uint8_t = 0..255, strucType = struct(...)
};

struct BSet {
    std::string name;
    std::vector<std::string> members;
};

struct BOperation {
    std::string name;
    std::vector<std::string> outputs;
    std::vector<std::string> params;
    std::vector<BPredPtr> pre; // conjuncts; the first ones type the parameters
    BSubstPtr body;
};

struct BMachine {
    std::string name;
    std::vector<BSet> sets;
    std::vector<std::string> constants;
    std::vector<BProperty> properties;
    std::vector<std::string> variables;
    std::vector<BPredPtr> invariant; // conjuncts; one typing conjunct per variable
    BSubstPtr initialisation;        // parallel assignment of every variable
    std::vector<BOperation> operations;

    const BOperation* find_operation(const std::string& name) const;
};

} // namespace scb
