#include "scb/b_emit.hpp"
#include "scb/b_validate.hpp"
#include "scb/parser.hpp"
#include "scb/translate.hpp"
#include "scb/typecheck.hpp"

#include "doctest.h"
#include "support.hpp"

using namespace scb;

namespace {

TranslationResult translate_src(const char* src) {
    return translate(typecheck(parse_program(src)));
}

std::string machine_text(const char* src) {
    return emit_machine(translate_src(src).machine);
}

bool tokens_match(const std::string& a, const std::string& b) {
    return tokenize_machine_text(a) == tokenize_machine_text(b);
}

} // namespace

TEST_SUITE_BEGIN("translator");

TEST_CASE("base types become range-constrained constants") {
    std::string text = machine_text(
        "node n(x: uint8) returns (y: uint8) let y = x; tel");
    CHECK(text.find("uint8_t") != std::string::npos);
    CHECK(text.find("uint8_t = 0..255") != std::string::npos);
    CHECK(text.find("uint16_t") == std::string::npos); // unused types stay out
}

TEST_CASE("all six base types carry their ranges") {
    std::string text = machine_text(R"(
node n(a: uint8; b: uint16; c: uint32; d: int8; e: int16; f: int32) returns (y: int32)
let
  y = f;
tel
)");
    CHECK(text.find("uint8_t = 0..255") != std::string::npos);
    CHECK(text.find("uint16_t = 0..65535") != std::string::npos);
    CHECK(text.find("uint32_t = 0..4294967295") != std::string::npos);
    CHECK(text.find("int8_t = -128..127") != std::string::npos);
    CHECK(text.find("int16_t = -32768..32767") != std::string::npos);
    CHECK(text.find("int32_t = -2147483648..2147483647") != std::string::npos);
}

TEST_CASE("enums become sets") {
    std::string text = machine_text(R"(
type MOVE = enum {Stop, Forward, Reverse};
node n(m: MOVE) returns (y: MOVE) let y = m; tel
)");
    CHECK(text.find("MOVE = {Stop, Forward, Reverse}") != std::string::npos);
}

TEST_CASE("struct types referenced by typing predicates get struct definitions") {
    std::string text = machine_text(R"(
type Tstr = {l1: int32, l2: int32^2};
node n(s: Tstr) returns (y: int32) let y = s.l1; tel
)");
    CHECK(text.find("Tstr = struct(l1 : int32_t, l2 : 0..1 --> int32_t)") != std::string::npos);
}

TEST_CASE("plain equations become assignments") {
    std::string text = machine_text(R"(
node n(L1: int32; L2: int32; L4: int32) returns (L3: int32; L5: int32)
let
  L3 = L1 + L2;
  L5 = L4 * L3;
tel
)");
    CHECK(text.find("L3 := L1 + L2") != std::string::npos);
    CHECK(text.find("L5 := L4 * L3") != std::string::npos);
}

TEST_CASE("array reads become function application") {
    std::string text = machine_text(R"(
node n(a1: uint8^3) returns (x: uint8) let x = a1[1]; tel
)");
    CHECK(text.find("x := a1(1)") != std::string::npos);
}

TEST_CASE("structure construction becomes rec") {
    std::string text = machine_text(R"(
type MOVE = enum {Stop, Forward, Reverse};
type structType = {fby_data: uint8, move: MOVE};
node n(fby_in: uint8) returns (strucDemo: structType)
let
  strucDemo = (make structType)(fby_in, Forward);
tel
)");
    CHECK(text.find("strucDemo := rec(fby_data: fby_in, move: Forward)") != std::string::npos);
}

TEST_CASE("conditional equations become IF substitutions on = TRUE") {
    std::string text = machine_text(R"(
node n(L7: bool; L5: int32; L6: int32) returns (L8: int32)
let
  L8 = if L7 then L5 else L6;
tel
)");
    CHECK(text.find("IF L7 = TRUE THEN") != std::string::npos);
    CHECK(text.find("L8 := L5") != std::string::npos);
    CHECK(text.find("ELSE") != std::string::npos);
    CHECK(text.find("L8 := L6") != std::string::npos);
}

TEST_CASE("case equations become CASE substitutions with an ELSE arm") {
    std::string text = machine_text(R"(
node n(L5: int32; L2: int32; L3: int32; L4: int32) returns (L1: int32)
let
  L1 = (case L5 of | 1 : L2 | 2 : L3 | _ : L4);
tel
)");
    CHECK(text.find("CASE L5 OF") != std::string::npos);
    CHECK(text.find("EITHER 1 THEN") != std::string::npos);
    CHECK(text.find("OR 2 THEN") != std::string::npos);
    CHECK(text.find("ELSE") != std::string::npos);
}

TEST_CASE("fby of depth 3 synthesizes a buffer with a shift chain") {
    std::string text = machine_text(R"(
node n(fby_in: uint8) returns (fby_out: uint8)
let
  fby_out = fby(fby_in; 3; 0);
tel
)");
    CHECK(text.find("store : 0..2 --> uint8_t") != std::string::npos);
    CHECK(text.find("store := {0 |-> 0, 1 |-> 0, 2 |-> 0}") != std::string::npos);
    CHECK(text.find("fby_out := store(0)") != std::string::npos);
    CHECK(text.find("store(0) := store(1)") != std::string::npos);
    CHECK(text.find("store(1) := store(2)") != std::string::npos);
    CHECK(text.find("store(2) := fby_in") != std::string::npos);
}

TEST_CASE("fby of depth 1 collapses the shift chain") {
    std::string text = machine_text(R"(
node n(x: uint8) returns (out: uint8)
let
  out = fby(x; 1; 7);
tel
)");
    CHECK(text.find("store := {0 |-> 7}") != std::string::npos);
    CHECK(text.find("out := store(0)") != std::string::npos);
    CHECK(text.find("store(0) := x") != std::string::npos);
    CHECK(text.find("store(1)") == std::string::npos);
}

TEST_CASE("two delays get disjoint buffers") {
    TranslationResult r = translate_src(R"(
node n(x: uint8; z: uint8) returns (a: uint8; b: uint8)
let
  a = fby(x; 2; 0);
  b = fby(z; 1; 5);
tel
)");
    const auto& vars = r.machine.variables;
    REQUIRE(vars.size() == 2);
    CHECK(vars[0] == "store_0");
    CHECK(vars[1] == "store_1");
    const auto& binding = r.binding_for("n");
    REQUIRE(binding.fbys.size() == 2);
    CHECK(binding.fbys[0].store_var != binding.fbys[1].store_var);
}

TEST_CASE("state machine translation follows the CASE/IF shape") {
    std::string text = machine_text(R"(
node n(cond1: bool; cond2: bool; cond3: bool; cond4: bool) returns (y: bool)
let
  y = cond1;
  automaton SM
    initial state init
    unless
      if cond1
        restart stateA;
    state stateA
    unless
      if cond2
        restart stateB;
    state stateB
    unless
      if cond3
        restart stateA;
      if cond4
        restart init;
  returns .. ;
tel
)");
    CHECK(text.find("STATE") == std::string::npos); // set named after the machine
    CHECK(text.find("SM = {init, stateA, stateB}") != std::string::npos);
    CHECK(text.find("sm_state : SM") != std::string::npos);
    CHECK(text.find("sm_state := init") != std::string::npos);
    CHECK(text.find("CASE sm_state OF") != std::string::npos);
    CHECK(text.find("EITHER init THEN") != std::string::npos);
    CHECK(text.find("IF cond1 = TRUE THEN") != std::string::npos);
    CHECK(text.find("ELSIF cond4 = TRUE THEN") != std::string::npos);
    CHECK(text.find("sm_state := stateB") != std::string::npos);
}

TEST_CASE("single state without transitions becomes one plain arm") {
    std::string text = machine_text(R"(
node n(x: uint8) returns (y: uint8)
let
  automaton ONLY
    initial state alone
    var
      L1: uint8;
    let
      L1 = x;
      y = L1;
    tel
  returns .. ;
tel
)");
    CHECK(text.find("CASE only_state OF") != std::string::npos);
    CHECK(text.find("EITHER alone THEN") != std::string::npos);
    CHECK(text.find("y := x") != std::string::npos); // the local copy is gone
}

TEST_CASE("strong transitions run the target state's equations") {
    TranslationResult r = translate(test::load_fixture("protocol_v1.scade"));
    std::string text = emit_machine(r.machine);
    // the Disconnected arm assigns the target state and its output
    size_t arm = text.find("EITHER Disconnected THEN");
    REQUIRE(arm != std::string::npos);
    size_t next = text.find("OR Connecting THEN", arm);
    std::string slice = text.substr(arm, next - arm);
    CHECK(slice.find("connection_state := Connecting") != std::string::npos);
    CHECK(slice.find("process_enable := FALSE") != std::string::npos);
}

TEST_CASE("map over a size constant produces the annotated loop") {
    std::string text = machine_text(R"(
const N: uint8 = 10;
function add2(a: int32; b: int32) returns (s: int32) let s = a + b; tel
node n(A1: int32^N; A2: int32^N) returns (v: int32^N)
let
  v = (map add2 <<N>>)(A1, A2);
tel
)");
    CHECK(text.find("WHILE idx < N DO") != std::string::npos);
    CHECK(text.find("v(idx) := A1(idx) + A2(idx)") != std::string::npos);
    CHECK(text.find("idx := idx + 1") != std::string::npos);
    CHECK(text.find("!i.(i : 0..(idx - 1) => v(i) = A1(i) + A2(i))") != std::string::npos);
    CHECK(text.find("VARIANT") != std::string::npos);
    CHECK(text.find("N - idx") != std::string::npos);
}

TEST_CASE("mapw loops carry the continuation flag and a default fill") {
    std::string text = machine_text(R"(
function probe(x: int32) returns (c: bool; v: int32)
let
  c = x < 5;
  v = x * 2;
tel
node n(A: int32^4) returns (v: int32^4)
let
  v = (mapw probe <<4>> if true default (9))(A);
tel
)");
    CHECK(text.find("WHILE idx < 4 & cond = TRUE DO") != std::string::npos);
    CHECK(text.find("cond, v(idx) := bool(A(idx) < 5), A(idx) * 2") != std::string::npos);
    CHECK(text.find("& cond = TRUE) =>") != std::string::npos); // guarded invariant
    // the default fill loop follows the main loop
    CHECK(text.find("v(idx) := 9") != std::string::npos);
}

TEST_CASE("fold threads the accumulator through a loop local") {
    std::string text = machine_text(R"(
function add2(a: int32; b: int32) returns (s: int32) let s = a + b; tel
node n(A: int32^3) returns (total: int32)
let
  total = (fold add2 <<3>>)(0, A);
tel
)");
    CHECK(text.find("VAR idx, acc IN") != std::string::npos);
    CHECK(text.find("idx, acc := 0, 0") != std::string::npos);
    CHECK(text.find("acc := acc + A(idx)") != std::string::npos);
    CHECK(text.find("total := acc") != std::string::npos);
}

TEST_CASE("operators that cannot be inlined fall back to an operation call") {
    TranslationResult r = translate_src(R"(
function pick(x: int32) returns (y: int32)
let
  y = if x > 0 then x else 0 - x;
tel
node n(A: int32^3) returns (v: int32^3)
let
  v = (map pick <<3>>)(A);
tel
)");
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("pick") != std::string::npos);
    std::string text = emit_machine(r.machine);
    CHECK(text.find("<-- pick(A(idx))") != std::string::npos);
    CHECK(r.machine.find_operation("pick") != nullptr);
}

TEST_CASE("golden: compute_sum translates token-identically") {
    TranslationResult r = translate(test::load_fixture("compute_sum.scade"));
    CHECK(tokens_match(emit_machine(r.machine), test::read_fixture("compute_sum.golden.mch")));
}

TEST_CASE("golden: protocol_v1 translates token-identically") {
    TranslationResult r = translate(test::load_fixture("protocol_v1.scade"));
    CHECK(tokens_match(emit_machine(r.machine), test::read_fixture("protocol_v1.golden.mch")));
}

TEST_CASE("golden: protocol_v2 translates token-identically") {
    TranslationResult r = translate(test::load_fixture("protocol_v2.scade"));
    CHECK(tokens_match(emit_machine(r.machine), test::read_fixture("protocol_v2.golden.mch")));
}

TEST_CASE("every translated machine validates cleanly") {
    for (const char* fixture :
         {"compute_sum.scade", "protocol_v1.scade", "protocol_v2.scade"}) {
        CAPTURE(fixture);
        TranslationResult r = translate(test::load_fixture(fixture));
        auto diags = validate_machine(r.machine);
        for (const auto& d : diags)
            CAPTURE(d);
        CHECK(diags.empty());
    }
}

TEST_CASE("translation is deterministic") {
    TypedProgram tp = test::load_fixture("compute_sum.scade");
    CHECK(emit_machine(translate(tp).machine) == emit_machine(translate(tp).machine));
}

TEST_CASE("machine name resolution: option beats pragma beats node name") {
    TypedProgram tp = test::load_fixture("compute_sum.scade");
    CHECK(translate(tp).machine.name == "example"); // pragma
    TranslateOptions options;
    options.machine_name = "override";
    CHECK(translate(tp, options).machine.name == "override");
    TypedProgram bare = typecheck(parse_program(
        "node solo(x: uint8) returns (y: uint8) let y = x; tel"));
    CHECK(translate(bare).machine.name == "solo");
}

TEST_CASE("a program with several nodes becomes one machine with several operations") {
    TranslationResult r = translate_src(R"(
node first(x: uint8) returns (y: uint8)
let
  y = fby(x; 1; 0);
tel
node second(w: uint8) returns (z: uint8)
let
  z = fby(w; 2; 0);
tel
)");
    REQUIRE(r.machine.operations.size() == 2);
    CHECK(r.machine.operations[0].name == "first");
    CHECK(r.machine.operations[1].name == "second");
    REQUIRE(r.machine.variables.size() == 2);
    CHECK(r.machine.variables[0] == "store_0");
    CHECK(r.machine.variables[1] == "store_1");
    CHECK(r.binding_for("first").fbys[0].store_var == "store_0");
    CHECK(r.binding_for("second").fbys[0].store_var == "store_1");
    CHECK(validate_machine(r.machine).empty());
}

TEST_CASE("the safety invariant pragma lands after the typing conjuncts") {
    TranslationResult r = translate(test::load_fixture("protocol_v1.scade"));
    REQUIRE(r.machine.invariant.size() == 4);
    CHECK(r.machine.invariant[0]->kind == BPred::Kind::Member);
    CHECK(r.machine.invariant[1]->kind == BPred::Kind::Member);
    CHECK(r.machine.invariant[2]->kind == BPred::Kind::Implies);
    CHECK(r.machine.invariant[3]->kind == BPred::Kind::Implies);
}

TEST_SUITE_END();
