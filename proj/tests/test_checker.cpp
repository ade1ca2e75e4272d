#include "scb/b_emit.hpp"
#include "scb/explore.hpp"
#include "scb/parser.hpp"
#include "scb/translate.hpp"
#include "scb/typecheck.hpp"

#include "doctest.h"
#include "support.hpp"

#include <set>

using namespace scb;

namespace {

struct Checked {
    TranslationResult translation;
    ExploreOptions options;

    explicit Checked(const std::string& fixture)
        : translation(translate(scb::test::load_fixture(fixture))) {
        options.types = &translation.types;
    }
};

std::string state_text(const BState& st) {
    std::string out;
    for (const auto& [name, value] : st.valuation)
        out += name + "=" + value.to_text() + " ";
    return out;
}

} // namespace

TEST_SUITE_BEGIN("checker");

TEST_CASE("the broken protocol yields the three-step counterexample") {
    Checked proto("protocol_v1.scade");
    ExploreResult result = explore(proto.translation.machine, proto.options);
    REQUIRE(result.kind == ExploreResult::Kind::Violation);
    const Counterexample& cex = *result.counterexample;
    REQUIRE(cex.steps.size() == 3);
    CHECK(cex.steps[0].op == "HandleEvent");
    CHECK(cex.steps[0].args[0].second.enum_member() == "ConnectRequest");
    CHECK(cex.steps[0].outputs[0].second.as_bool() == false);
    CHECK(cex.steps[1].args[0].second.enum_member() == "ConnectAck");
    CHECK(cex.steps[1].outputs[0].second.as_bool() == true);
    CHECK(cex.steps[2].args[0].second.enum_member() == "DisconnectRequest");
    CHECK(cex.steps[2].outputs[0].second.as_bool() == false);
    CHECK(cex.final_state.valuation.at("connection_state").enum_member() == "Disconnecting");
    CHECK(cex.final_state.valuation.at("process_state").enum_member() == "Enable");
    CHECK(cex.rendering == "process_state = Enable => connection_state = Connected");
}

TEST_CASE("no shorter violating trace exists") {
    // exhaustive check below the returned length: every state reachable in
    // at most two steps satisfies the invariant
    Checked proto("protocol_v1.scade");
    const BMachine& m = proto.translation.machine;
    std::vector<Value> events;
    for (const auto& member : m.sets[0].members) // INPUT_EVENT is declared first
        events.push_back(Value::make_enum("INPUT_EVENT", member));
    REQUIRE(m.sets[0].name == "INPUT_EVENT");

    InvokeOptions io;
    io.defer_machine_invariant = true;
    io.types = proto.options.types;
    BState init = init_machine(m, proto.options.types);
    CHECK(check_invariant(m, init).holds);
    for (const auto& e1 : events) {
        InvokeResult r1 = invoke(m, init, "HandleEvent", {e1}, io);
        REQUIRE(r1.ok);
        CHECK(check_invariant(m, r1.state).holds);
        for (const auto& e2 : events) {
            InvokeResult r2 = invoke(m, r1.state, "HandleEvent", {e2}, io);
            REQUIRE(r2.ok);
            CHECK(check_invariant(m, r2.state).holds);
        }
    }
}

TEST_CASE("the repaired protocol verifies with exactly four reachable states") {
    Checked proto("protocol_v2.scade");
    ExploreOptions options = proto.options;
    options.collect_states = true;
    ExploreResult result = explore(proto.translation.machine, options);
    REQUIRE(result.kind == ExploreResult::Kind::Verified);
    CHECK(result.states_visited == 4);
    CHECK(result.transitions_fired == 16);

    // the four states enumerated by hand from the transition table
    std::set<std::string> expected{
        "connection_state=Disconnected process_state=Disable ",
        "connection_state=Connecting process_state=Disable ",
        "connection_state=Connected process_state=Enable ",
        "connection_state=Disconnecting process_state=Disable ",
    };
    std::set<std::string> got;
    for (const auto& st : result.states)
        got.insert(state_text(st));
    CHECK(got == expected);

    // soundness: a second pass over every enumerated state finds no violation
    for (const auto& st : result.states)
        CHECK(check_invariant(proto.translation.machine, st).holds);
}

TEST_CASE("an initial state violating the invariant is a zero-step violation") {
    BMachine m;
    m.name = "broken";
    m.sets.push_back(BSet{"S", {"a", "b"}});
    m.variables = {"x"};
    m.invariant.push_back(b_member(b_ref("x"), b_domain_name("S")));
    m.invariant.push_back(b_compare(BCmpOp::Eq, b_ref("x"), b_ref("b")));
    m.initialisation = b_assign_var("x", b_ref("a"));
    BOperation op;
    op.name = "noop";
    op.body = b_skip();
    m.operations.push_back(std::move(op));

    ExploreResult result = explore(m);
    REQUIRE(result.kind == ExploreResult::Kind::Violation);
    CHECK(result.counterexample->steps.empty());
    CHECK(result.counterexample->failing_conjunct == 1);
}

TEST_CASE("replay confirms the counterexample and rejects it on the fixed machine") {
    Checked broken("protocol_v1.scade");
    Checked fixed("protocol_v2.scade");
    ExploreResult result = explore(broken.translation.machine, broken.options);
    REQUIRE(result.kind == ExploreResult::Kind::Violation);
    CHECK(replay(broken.translation.machine, *result.counterexample,
                 broken.options.types));
    CHECK(!replay(fixed.translation.machine, *result.counterexample, fixed.options.types));

    Counterexample empty;
    CHECK(!replay(broken.translation.machine, empty, broken.options.types));
}

TEST_CASE("the state bound trips exploration") {
    Checked proto("protocol_v2.scade");
    ExploreOptions options = proto.options;
    options.max_states = 1;
    ExploreResult result = explore(proto.translation.machine, options);
    CHECK(result.kind == ExploreResult::Kind::BoundExceeded);
    CHECK(result.bound == 1);
}

TEST_CASE("exploration is deterministic") {
    Checked proto("protocol_v1.scade");
    ExploreResult a = explore(proto.translation.machine, proto.options);
    ExploreResult b = explore(proto.translation.machine, proto.options);
    REQUIRE(a.kind == ExploreResult::Kind::Violation);
    REQUIRE(b.kind == ExploreResult::Kind::Violation);
    REQUIRE(a.counterexample->steps.size() == b.counterexample->steps.size());
    for (size_t i = 0; i < a.counterexample->steps.size(); ++i) {
        CHECK(a.counterexample->steps[i].op == b.counterexample->steps[i].op);
        CHECK(a.counterexample->steps[i].args == b.counterexample->steps[i].args);
        CHECK(a.counterexample->steps[i].post == b.counterexample->steps[i].post);
    }
}

TEST_CASE("integer parameters draw their domain from PRE typing") {
    const char* src = R"(
node counter(d: uint8) returns (y: uint8)
let
  y = fby(d; 1; 0);
tel
)";
    TranslationResult tr = translate(typecheck(parse_program(src)));
    ExploreOptions options;
    options.types = &tr.types;
    options.max_states = 500;
    ExploreResult result = explore(tr.machine, options);
    // all 256 buffer contents are reachable
    CHECK(result.kind == ExploreResult::Kind::Verified);
    CHECK(result.states_visited == 256);

    // a narrowed user range shrinks the space
    options.int_domains["d"] = {0, 3};
    ExploreResult narrowed = explore(tr.machine, options);
    CHECK(narrowed.states_visited == 4);

    // an unenumerably wide parameter is refused with guidance
    const char* wide = R"(
node w(d: uint32) returns (y: uint32)
let
  y = fby(d; 1; 0);
tel
)";
    TranslationResult wide_tr = translate(typecheck(parse_program(wide)));
    ExploreOptions wide_options;
    wide_options.types = &wide_tr.types;
    CHECK_THROWS_AS(explore(wide_tr.machine, wide_options), TranslateError);
}

TEST_SUITE_END();
