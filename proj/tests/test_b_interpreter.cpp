#include "scb/b_emit.hpp"
#include "scb/b_eval.hpp"
#include "scb/parser.hpp"
#include "scb/translate.hpp"
#include "scb/typecheck.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>

using namespace scb;

namespace {

Value u8(long long v) { return Value::make_int(v, 0, 255); }

Value u8_array(std::vector<long long> xs) {
    std::vector<Value> cells;
    for (long long x : xs)
        cells.push_back(u8(x));
    return Value::make_array(std::move(cells));
}

struct Machine {
    TranslationResult translation;
    InvokeOptions options;

    explicit Machine(const std::string& fixture)
        : translation(translate(scb::test::load_fixture(fixture))) {
        options.types = &translation.types;
        options.defer_machine_invariant = true;
    }

    const BMachine& machine() const { return translation.machine; }
};

Value member(const std::string& set, const std::string& name) {
    return Value::make_enum(set, name);
}

} // namespace

TEST_SUITE_BEGIN("b_interpreter");

TEST_CASE("initialisation of the translated machines") {
    Machine cs("compute_sum.scade");
    BState st = init_machine(cs.machine(), &cs.translation.types);
    CHECK(st.valuation.at("store") == u8_array({0, 0, 0}));
    CHECK(st.valuation.at("sm_state").enum_member() == "init");

    Machine proto("protocol_v1.scade");
    BState pst = init_machine(proto.machine(), &proto.translation.types);
    CHECK(pst.valuation.at("connection_state").enum_member() == "Disconnected");
    CHECK(pst.valuation.at("process_state").enum_member() == "Disable");
}

TEST_CASE("initialisation that breaks the invariant is an error") {
    BMachine m;
    m.name = "broken";
    m.variables = {"x"};
    m.invariant.push_back(b_member(b_ref("x"), b_domain_interval(b_int(0), b_int(1))));
    m.initialisation = b_assign_var("x", b_int(5));
    try {
        init_machine(m);
        FAIL("expected an invariant error");
    } catch (const EvalError& e) {
        CHECK(e.kind() == EvalErrorKind::Invariant);
    }
}

TEST_CASE("parallel initialisation branches act simultaneously") {
    BMachine m;
    m.name = "par";
    m.variables = {"x", "y"};
    m.invariant.push_back(b_member(b_ref("x"), b_domain_interval(b_int(0), b_int(9))));
    m.invariant.push_back(b_member(b_ref("y"), b_domain_interval(b_int(0), b_int(9))));
    auto par = std::make_unique<BSubst>();
    par->kind = BSubst::Kind::Parallel;
    par->subs.push_back(b_assign_var("x", b_int(1)));
    par->subs.push_back(b_assign_var("y", b_int(2)));
    m.initialisation = std::move(par);
    BState st = init_machine(m);
    CHECK(st.valuation.at("x").as_int() == 1);
    CHECK(st.valuation.at("y").as_int() == 2);
}

TEST_CASE("invoking ComputeSum reproduces the third reference cycle") {
    Machine cs("compute_sum.scade");
    // state after cycle 2: store = [0,0,1], sm_state = stateB
    BState st;
    st.valuation["store"] = u8_array({0, 0, 1});
    st.valuation["sm_state"] = member("STATE", "stateB");
    std::vector<Value> args{u8_array({6, 7, 8, 9, 10}), u8(2)};
    InvokeResult r = invoke(cs.machine(), st, "ComputeSum", args, cs.options);
    REQUIRE(r.ok);
    CHECK(r.outputs.at("output") == u8_array({36, 49, 64, 81, 100}));
    CHECK(r.outputs.at("fby_out") == u8(0));
    CHECK(r.outputs.at("strucDemo").field("fby_data") == u8(2));
    CHECK(r.outputs.at("strucDemo").field("move").enum_member() == "Reverse");
    CHECK(r.state.valuation.at("store") == u8_array({0, 1, 2}));
    CHECK(r.state.valuation.at("sm_state").enum_member() == "stateA");
    CHECK(r.loop_diagnostics() == 0);
}

TEST_CASE("an argument outside PRE aborts with a PreViolation") {
    Machine cs("compute_sum.scade");
    BState st = init_machine(cs.machine(), &cs.translation.types);
    std::vector<Value> args{u8_array({0, 0, 0, 0, 0}), Value::make_int(300, 0, 1000)};
    InvokeResult r = invoke(cs.machine(), st, "ComputeSum", args, cs.options);
    CHECK(!r.ok);
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics[0].kind == BDiagKind::PreViolation);
    // state unchanged
    CHECK(r.state == st);
}

TEST_CASE("HandleEvent walks into the violating state under deferred checking") {
    Machine proto("protocol_v1.scade");
    BState st;
    st.valuation["connection_state"] = member("CON_STATE", "Connected");
    st.valuation["process_state"] = member("PRO_STATE", "Enable");
    std::vector<Value> args{member("INPUT_EVENT", "DisconnectRequest")};
    InvokeResult r = invoke(proto.machine(), st, "HandleEvent", args, proto.options);
    REQUIRE(r.ok);
    CHECK(r.outputs.at("process_enable").as_bool() == false);
    CHECK(r.state.valuation.at("connection_state").enum_member() == "Disconnecting");
    CHECK(r.state.valuation.at("process_state").enum_member() == "Enable");

    InvariantCheck check = check_invariant(proto.machine(), r.state);
    CHECK(!check.holds);
    CHECK(check.failing_conjunct == 2);
    CHECK(check.rendering == "process_state = Enable => connection_state = Connected");

    // without deferral the violation surfaces as a diagnostic
    InvokeOptions strict = proto.options;
    strict.defer_machine_invariant = false;
    InvokeResult r2 = invoke(proto.machine(), st, "HandleEvent", args, strict);
    REQUIRE(r2.ok);
    bool flagged = false;
    for (const auto& d : r2.diagnostics)
        flagged |= d.kind == BDiagKind::InvariantViolation;
    CHECK(flagged);
}

TEST_CASE("check_invariant accepts the states the requirement allows") {
    Machine proto("protocol_v1.scade");
    BState ok1;
    ok1.valuation["connection_state"] = member("CON_STATE", "Connected");
    ok1.valuation["process_state"] = member("PRO_STATE", "Enable");
    CHECK(check_invariant(proto.machine(), ok1).holds);

    BState ok2;
    ok2.valuation["connection_state"] = member("CON_STATE", "Disconnected");
    ok2.valuation["process_state"] = member("PRO_STATE", "Disable");
    CHECK(check_invariant(proto.machine(), ok2).holds);
}

TEST_CASE("WHILE instrumentation flags a broken invariant and variant") {
    // x counts 0..2; the planted invariant claims x stays below 2, and the
    // planted variant never decreases
    BMachine m;
    m.name = "loops";
    BOperation op;
    op.name = "run";
    op.outputs = {"y"};
    auto mk_loop = [&](BPredPtr inv, BExprPtr variant) {
        auto loop = std::make_unique<BSubst>();
        loop->kind = BSubst::Kind::While;
        loop->while_cond = b_compare(BCmpOp::Lt, b_ref("x"), b_int(3));
        loop->while_body = b_assign_var("x", b_binary(BBinOp::Add, b_ref("x"), b_int(1)));
        loop->invariant = std::move(inv);
        loop->variant = std::move(variant);
        return loop;
    };
    std::vector<BSubstPtr> seq;
    {
        auto var = std::make_unique<BSubst>();
        var->kind = BSubst::Kind::Var;
        var->var_names = {"x"};
        std::vector<BSubstPtr> inner;
        inner.push_back(b_assign_var("x", b_int(0)));
        inner.push_back(mk_loop(b_compare(BCmpOp::Lt, b_ref("x"), b_int(2)),
                                b_binary(BBinOp::Sub, b_int(3), b_ref("x"))));
        inner.push_back(b_assign_var("y", b_ref("x")));
        var->var_body = b_seq(std::move(inner));
        seq.push_back(std::move(var));
    }
    op.body = b_seq(std::move(seq));
    m.operations.push_back(std::move(op));

    InvokeResult r = invoke(m, BState{}, "run", {});
    REQUIRE(r.ok);
    CHECK(r.outputs.at("y").as_int() == 3);
    // invariant x < 2 fails after the second and third iterations
    CHECK(r.loop_diagnostics() == 2);

    // now plant a non-decreasing variant: execution aborts the loop
    BMachine m2;
    m2.name = "loops2";
    BOperation op2;
    op2.name = "run";
    op2.outputs = {"y"};
    auto var = std::make_unique<BSubst>();
    var->kind = BSubst::Kind::Var;
    var->var_names = {"x"};
    std::vector<BSubstPtr> inner;
    inner.push_back(b_assign_var("x", b_int(0)));
    {
        auto loop = std::make_unique<BSubst>();
        loop->kind = BSubst::Kind::While;
        loop->while_cond = b_compare(BCmpOp::Lt, b_ref("x"), b_int(3));
        loop->while_body = b_assign_var("x", b_binary(BBinOp::Add, b_ref("x"), b_int(1)));
        loop->invariant = b_compare(BCmpOp::Ge, b_ref("x"), b_int(0));
        loop->variant = b_int(5); // constant: never decreases
        inner.push_back(std::move(loop));
    }
    inner.push_back(b_assign_var("y", b_ref("x")));
    var->var_body = b_seq(std::move(inner));
    op2.body = std::move(var);
    m2.operations.push_back(std::move(op2));

    InvokeResult r2 = invoke(m2, BState{}, "run", {});
    bool variant_flagged = false;
    for (const auto& d : r2.diagnostics)
        variant_flagged |= d.kind == BDiagKind::VariantViolation;
    CHECK(variant_flagged);
}

TEST_CASE("parallel substitution is order-independent and rejects overlap") {
    BMachine m;
    m.name = "par";
    m.variables = {"x", "y"};
    m.invariant.push_back(b_member(b_ref("x"), b_domain_interval(b_int(0), b_int(99))));
    m.invariant.push_back(b_member(b_ref("y"), b_domain_interval(b_int(0), b_int(99))));
    auto init = std::make_unique<BSubst>();
    init->kind = BSubst::Kind::Parallel;
    init->subs.push_back(b_assign_var("x", b_int(1)));
    init->subs.push_back(b_assign_var("y", b_int(2)));
    m.initialisation = std::move(init);

    auto swap_op = [&](bool reversed) {
        BOperation op;
        op.name = reversed ? "swap_r" : "swap";
        auto par = std::make_unique<BSubst>();
        par->kind = BSubst::Kind::Parallel;
        auto first = b_assign_var("x", b_ref("y"));
        auto second = b_assign_var("y", b_ref("x"));
        if (reversed) {
            par->subs.push_back(std::move(second));
            par->subs.push_back(std::move(first));
        } else {
            par->subs.push_back(std::move(first));
            par->subs.push_back(std::move(second));
        }
        op.body = std::move(par);
        return op;
    };
    m.operations.push_back(swap_op(false));
    m.operations.push_back(swap_op(true));

    BState st = init_machine(m);
    InvokeResult a = invoke(m, st, "swap", {});
    InvokeResult b = invoke(m, st, "swap_r", {});
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    // both branches read the entry state, so the order never matters
    CHECK(a.state == b.state);
    CHECK(a.state.valuation.at("x").as_int() == 2);
    CHECK(a.state.valuation.at("y").as_int() == 1);

    BOperation clash;
    clash.name = "clash";
    auto par = std::make_unique<BSubst>();
    par->kind = BSubst::Kind::Parallel;
    par->subs.push_back(b_assign_var("x", b_int(7)));
    par->subs.push_back(b_assign_var("x", b_int(8)));
    clash.body = std::move(par);
    m.operations.push_back(std::move(clash));
    InvokeResult c = invoke(m, st, "clash", {});
    CHECK(!c.ok);
    REQUIRE(!c.diagnostics.empty());
    CHECK(c.diagnostics[0].kind == BDiagKind::NonDisjointParallel);
}

TEST_CASE("cell update changes exactly one cell") {
    Machine cs("compute_sum.scade");
    BState st = init_machine(cs.machine(), &cs.translation.types);
    for (long long seed = 0; seed < 20; ++seed) {
        std::vector<long long> input(5), before(5);
        for (int i = 0; i < 5; ++i)
            input[(size_t)i] = (seed * 31 + i * 7) % 16; // squares stay in range
        Value pre_store = st.valuation.at("store");
        std::vector<Value> args{u8_array(input), u8(seed % 250)};
        InvokeResult r = invoke(cs.machine(), st, "ComputeSum", args, cs.options);
        REQUIRE(r.ok);
        // the shift moves cells 1,2 down and writes the tail: cell by cell,
        // post[i] = pre[i+1] for i < 2 and post[2] = fby_in
        const auto& post = r.state.valuation.at("store").cells();
        CHECK(post[0] == pre_store.cells()[1]);
        CHECK(post[1] == pre_store.cells()[2]);
        CHECK(post[2].as_int() == seed % 250);
        st = std::move(r.state);
    }
}

TEST_CASE("range discipline matches the source side: cell writes are checked") {
    Machine cs("compute_sum.scade");
    BState st = init_machine(cs.machine(), &cs.translation.types);
    // squares of cells >= 16 overflow uint8, which must fault, not wrap
    std::vector<Value> args{u8_array({16, 0, 0, 0, 0}), u8(0)};
    InvokeResult r = invoke(cs.machine(), st, "ComputeSum", args, cs.options);
    CHECK(!r.ok);
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics[0].kind == BDiagKind::RangeError);
    CHECK(r.diagnostics[0].fault == EvalErrorKind::Range);
}

TEST_CASE("invoke is deterministic") {
    Machine proto("protocol_v2.scade");
    BState st = init_machine(proto.machine(), &proto.translation.types);
    std::vector<Value> args{member("INPUT_EVENT", "ConnectRequest")};
    InvokeResult a = invoke(proto.machine(), st, "HandleEvent", args, proto.options);
    InvokeResult b = invoke(proto.machine(), st, "HandleEvent", args, proto.options);
    CHECK(a.state == b.state);
    CHECK(a.outputs == b.outputs);
}

TEST_SUITE_END();
