#include "scb/b_emit.hpp"
#include "scb/b_pred_parse.hpp"
#include "scb/b_validate.hpp"
#include "scb/diag.hpp"

#include "doctest.h"

using namespace scb;

namespace {

BMachine counter_machine() {
    // MACHINE counter with x : 0..7, one operation bump
    BMachine m;
    m.name = "counter";
    m.variables = {"x"};
    m.invariant.push_back(b_member(b_ref("x"), b_domain_interval(b_int(0), b_int(7))));
    m.initialisation = b_assign_var("x", b_int(0));
    BOperation op;
    op.name = "bump";
    op.params = {"d"};
    op.pre.push_back(b_member(b_ref("d"), b_domain_interval(b_int(0), b_int(1))));
    op.body = b_assign_var("x", b_binary(BBinOp::Add, b_ref("x"), b_ref("d")));
    m.operations.push_back(std::move(op));
    return m;
}

} // namespace

TEST_SUITE_BEGIN("b_model");

TEST_CASE("maplet initialisation renders explicitly") {
    auto store = std::make_unique<BExpr>();
    store->kind = BExpr::Kind::MapletSet;
    for (int i = 0; i < 3; ++i)
        store->maplets.emplace_back(b_int(i), b_int(0));
    auto sub = b_assign_var("store", std::move(store));
    CHECK(render_subst(*sub) == "store := {0 |-> 0, 1 |-> 0, 2 |-> 0}");
}

TEST_CASE("constant-function form renders as an interval product") {
    auto e = std::make_unique<BExpr>();
    e->kind = BExpr::Kind::ConstFun;
    e->args.push_back(b_int(0));
    e->args.push_back(b_int(2));
    e->args.push_back(b_int(9));
    CHECK(render_expr(*e) == "(0..2)*{9}");
}

TEST_CASE("machine without variables elides the state clauses") {
    BMachine m;
    m.name = "pure";
    BOperation op;
    op.name = "noop";
    op.body = b_skip();
    m.operations.push_back(std::move(op));
    std::string text = emit_machine(m);
    CHECK(text.find("VARIABLES") == std::string::npos);
    CHECK(text.find("INVARIANT") == std::string::npos);
    CHECK(text.find("INITIALISATION") == std::string::npos);
    CHECK(text.find("BEGIN") != std::string::npos);
    CHECK(validate_machine(m).empty());
}

TEST_CASE("a well-formed machine validates cleanly and re-validates after emission") {
    BMachine m = counter_machine();
    CHECK(validate_machine(m).empty());
    CHECK(emit_machine(m).find("x : 0..7") != std::string::npos);
}

TEST_CASE("missing initialisation of a variable is diagnosed") {
    BMachine m = counter_machine();
    m.variables.push_back("sm_state");
    m.invariant.push_back(b_member(b_ref("sm_state"), b_domain_interval(b_int(0), b_int(1))));
    auto diags = validate_machine(m);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("not initialised: sm_state") != std::string::npos);
}

TEST_CASE("WHILE without VARIANT is diagnosed") {
    BMachine m = counter_machine();
    auto loop = std::make_unique<BSubst>();
    loop->kind = BSubst::Kind::While;
    loop->while_cond = b_compare(BCmpOp::Lt, b_ref("x"), b_int(3));
    loop->while_body = b_assign_var("x", b_binary(BBinOp::Add, b_ref("x"), b_int(1)));
    auto inv = std::make_unique<BPred>();
    inv->kind = BPred::Kind::Forall;
    inv->var = "i";
    inv->lo = b_int(0);
    inv->hi = b_int(0);
    inv->body = b_compare(BCmpOp::Ge, b_ref("x"), b_int(0));
    loop->invariant = std::move(inv);
    m.operations[0].body = std::move(loop);
    auto diags = validate_machine(m);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("WHILE without VARIANT") != std::string::npos);
}

TEST_CASE("untyped variable is diagnosed") {
    BMachine m = counter_machine();
    m.variables.push_back("ghost");
    auto diags = validate_machine(m);
    CHECK(diags.size() == 2); // untyped and uninitialised
}

TEST_CASE("parameter without a PRE typing conjunct is diagnosed") {
    BMachine m = counter_machine();
    m.operations[0].pre.clear();
    auto diags = validate_machine(m);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("parameter not typed") != std::string::npos);
}

TEST_CASE("emission is deterministic and distinguishes machines") {
    BMachine a = counter_machine();
    BMachine b = counter_machine();
    CHECK(emit_machine(a) == emit_machine(b));
    b.name = "counter2";
    CHECK(tokenize_machine_text(emit_machine(a)) != tokenize_machine_text(emit_machine(b)));
    BMachine c = counter_machine();
    c.operations[0].body = b_assign_var("x", b_binary(BBinOp::Sub, b_ref("x"), b_ref("d")));
    CHECK(tokenize_machine_text(emit_machine(a)) != tokenize_machine_text(emit_machine(c)));
}

TEST_CASE("unicode flavor maps operator spellings and tokenizes back to ASCII") {
    BMachine m = counter_machine();
    std::string unicode = emit_machine(m, BFlavor::Unicode);
    CHECK(unicode.find("∈") != std::string::npos); // membership glyph
    CHECK(unicode.find(" : ") == std::string::npos);
    CHECK(tokenize_machine_text(unicode) == tokenize_machine_text(emit_machine(m)));
}

TEST_CASE("token comparison ignores whitespace and comments") {
    auto a = tokenize_machine_text("x := 0..255 /* note */ & y\n");
    auto b = tokenize_machine_text("  x:=0..255&y // trailing");
    CHECK(a == b);
    CHECK(a == std::vector<std::string>{"x", ":=", "0", "..", "255", "&", "y"});
}

TEST_CASE("pragma predicates parse into the expected tree") {
    BPredPtr p = parse_b_predicate(
        "(process_state = Enable => connection_state = Connected) & "
        "(connection_state /= Connected => process_state = Disable)");
    REQUIRE(p->kind == BPred::Kind::And);
    CHECK(p->preds[0]->kind == BPred::Kind::Implies);
    CHECK(p->preds[1]->kind == BPred::Kind::Implies);
    CHECK(render_pred(*p) ==
          "(process_state = Enable => connection_state = Connected) & "
          "(connection_state /= Connected => process_state = Disable)");
}

TEST_CASE("pragma parser handles membership, arithmetic and rejects garbage") {
    CHECK(render_pred(*parse_b_predicate("x : 0..7 & x + 1 < 9")) == "x : 0..7 & x + 1 < 9");
    CHECK(render_pred(*parse_b_predicate("not(a = b) or c : STATES")) ==
          "not(a = b) or c : STATES");
    CHECK_THROWS_AS(parse_b_predicate("x ="), TranslateError);
    CHECK_THROWS_AS(parse_b_predicate("(a = b"), TranslateError);
}

TEST_SUITE_END();
