#include "scb/b_validate.hpp"
#include "scb/lockstep.hpp"
#include "scb/parser.hpp"
#include "scb/trace_io.hpp"
#include "scb/typecheck.hpp"

#include "doctest.h"
#include "hof_oracle.hpp"
#include "support.hpp"

using namespace scb;

namespace {

struct Pair {
    TypedProgram program;
    TranslationResult translation;

    explicit Pair(const std::string& fixture)
        : program(scb::test::load_fixture(fixture)), translation(translate(program)) {}

    const NodeDecl& node() const {
        for (const auto& n : program.program.nodes)
            if (!n.is_function)
                return n;
        throw std::runtime_error("no node");
    }
};

/// Drop the first buffer-shift assignment `store(0) := store(1)` from the
/// ComputeSum body; replaying the reference trace on the mutated machine is
/// the sensitivity oracle.
void drop_first_shift(BMachine& machine) {
    BOperation* op = nullptr;
    for (auto& o : machine.operations)
        if (o.name == "ComputeSum")
            op = &o;
    REQUIRE(op != nullptr);
    REQUIRE(op->body->kind == BSubst::Kind::Seq);
    auto& seq = op->body->subs;
    for (size_t i = 0; i < seq.size(); ++i) {
        const BSubst& s = *seq[i];
        if (s.kind != BSubst::Kind::Assign || s.lvalues.size() != 1)
            continue;
        const BLValue& lv = s.lvalues[0];
        if (lv.name == "store" && lv.index && lv.index->kind == BExpr::Kind::IntLit &&
            lv.index->int_val == 0 && s.exprs[0]->kind == BExpr::Kind::Apply) {
            seq.erase(seq.begin() + (long)i);
            return;
        }
    }
    FAIL("shift assignment not found");
}

} // namespace

TEST_SUITE_BEGIN("lockstep");

TEST_CASE("the five-cycle reference trace runs equivalently") {
    Pair cs("compute_sum.scade");
    Trace trace = parse_trace_text(test::read_fixture("compute_sum.trace"), cs.node());
    REQUIRE(trace.cycles.size() == 5);
    DiffReport report = run_lockstep(cs.program, cs.node(), cs.translation, trace);
    CHECK(report.equivalent());
    CHECK(report.cycles_compared == 5);
    CHECK(report.loop_diagnostics == 0);
}

TEST_CASE("the empty trace compares zero cycles") {
    Pair cs("compute_sum.scade");
    DiffReport report = run_lockstep(cs.program, cs.node(), cs.translation, Trace{});
    CHECK(report.equivalent());
    CHECK(report.cycles_compared == 0);
}

TEST_CASE("dropping one shift assignment diverges at cycle 4 on the mapped state") {
    Pair cs("compute_sum.scade");
    Trace trace = parse_trace_text(test::read_fixture("compute_sum.trace"), cs.node());

    TranslationResult mutated = translate(cs.program);
    drop_first_shift(mutated.machine);

    DiffReport report = run_lockstep(cs.program, cs.node(), mutated, trace);
    CHECK(!report.equivalent());
    CHECK(report.cycle == 4);
    CHECK(report.kind == DiffReport::DivergenceKind::MappedState);
    CHECK(report.name == "store");

    // minimality: the three-cycle prefix still runs equivalently
    Trace prefix;
    prefix.cycles.assign(trace.cycles.begin(), trace.cycles.begin() + 3);
    DiffReport before = run_lockstep(cs.program, cs.node(), mutated, prefix);
    CHECK(before.equivalent());
}

TEST_CASE("seeded random traces stay equivalent on both corpus pairs") {
    Pair cs("compute_sum.scade");
    Pair proto("protocol_v2.scade");
    int loop_diags = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        {
            Trace trace = generate_trace(cs.node(), seed, 20);
            DiffReport report = run_lockstep(cs.program, cs.node(), cs.translation, trace);
            CAPTURE(seed);
            CHECK(report.equivalent());
            loop_diags += report.loop_diagnostics;
        }
        {
            Trace trace = generate_trace(proto.node(), seed, 20);
            DiffReport report = run_lockstep(proto.program, proto.node(), proto.translation, trace);
            CAPTURE(seed);
            CHECK(report.equivalent());
            CHECK(report.cycles_compared == 20);
            loop_diags += report.loop_diagnostics;
        }
    }
    CHECK(loop_diags == 0);
}

TEST_CASE("identical faults end the comparison as matching behavior") {
    // squares of large cells overflow uint8 on both sides with the same kind
    Pair cs("compute_sum.scade");
    Trace trace;
    CycleInputs bad;
    std::vector<Value> cells(5, Value::make_int(20, 0, 255));
    bad["input"] = Value::make_array(std::move(cells));
    bad["fby_in"] = Value::make_int(0, 0, 255);
    trace.cycles.push_back(std::move(bad));
    DiffReport report = run_lockstep(cs.program, cs.node(), cs.translation, trace);
    CHECK(report.equivalent());
    CHECK(report.cycles_compared == 1);
}

TEST_CASE("trace generation is deterministic and seed-sensitive") {
    Pair cs("compute_sum.scade");
    Trace a = generate_trace(cs.node(), 0, 3);
    Trace b = generate_trace(cs.node(), 0, 3);
    REQUIRE(a.cycles.size() == 3);
    CHECK(a.cycles == b.cycles);
    // shape: a five-cell array and a scalar per cycle
    CHECK(a.cycles[0].at("input").cells().size() == 5);
    CHECK(a.cycles[0].at("fby_in").kind() == Value::Kind::Int);
    Trace c = generate_trace(cs.node(), 1, 3);
    CHECK(a.cycles != c.cycles); // pinned: seeds 0 and 1 differ
}

TEST_CASE("corner constructs stay equivalent through the whole pipeline") {
    // each program leans on a different translation rule; all of them must
    // agree with their machine over random traces
    const char* programs[] = {
        // delay inside a conditional block: the shift runs only when the
        // branch is active
        R"(
node a(c: bool; x: int16) returns (y: int16; z: int16)
let
  z = x + 1;
  activate B
  if (c) then
    let
      y = fby(x; 2; 5);
    tel
  else
    let
      y = 0 - 1;
    tel
  returns .. ;
tel
)",
        // case dispatch over an enum
        R"(
type COLOR = enum {Red, Green, Blue};
node b(col: COLOR; x: int16) returns (y: int16)
let
  y = (case col of | Red : x + 1 | Green : x * 2 | _ : 0);
tel
)",
        // nested conditional expressions at equation top
        R"(
node c(x: int16; w: int16) returns (y: int16)
let
  y = if x > 0 then (if w > x then w else x) else 0 - x;
tel
)",
        // iterator whose operator cannot be inlined: operation-call fallback
        R"(
function clamp(x: int16) returns (y: int16)
let
  y = if x > 100 then 100 else x;
tel
node d(A: int16^3) returns (v: int16^3)
let
  v = (map clamp <<3>>)(A);
tel
)",
        // accumulator iterator through the full pipeline
        R"(
function tally(i: int32; a: int32; x: int32) returns (a2: int32)
let
  a2 = a + i * x;
tel
node e(A: int32^4) returns (total: int32)
let
  total = (foldi tally <<4>>)(0, A);
tel
)",
        // early-exit mapfold with defaults
        R"(
function probe(a: int32; x: int32) returns (c: bool; a2: int32; v: int32)
let
  c = a < 50;
  a2 = a + x;
  v = a - x;
tel
node f(A: int32^4) returns (stop: int32; fc: bool; acc: int32; v: int32^4)
let
  stop, fc, acc, v = (mapfoldw 1 probe <<4>> if true default (9))(0, A);
tel
)",
        // records in and out
        R"(
type P = {a: int16, b: bool};
node g(p: P; x: int16) returns (q: P; y: int16)
let
  q = (make P)(x, p.b);
  y = p.a + x;
tel
)",
        // direct operator call, inlined
        R"(
function mix(a: int16; b: int16) returns (s: int16; d: int16)
let
  s = a + b;
  d = a - b;
tel
node h(x: int16; w: int16) returns (s: int16; d: int16)
let
  s, d = mix(x, w);
tel
)",
        // two delays and two machines side by side
        R"(
node i(x: int8; w: int8) returns (y: int8; z: int8)
let
  y = fby(x; 2; 1);
  z = fby(w; 3; 2);
  automaton M1
    initial state p
    unless
      if x > 0
        restart q;
    state q
    unless
      if x < 0
        restart p;
  returns .. ;
  automaton M2
    initial state r
    unless
      if w = 0
        restart s;
    state s
  returns .. ;
tel
)",
        // a delay owned by one state: its buffer shifts only while that
        // state is active and survives leaving it
        R"(
node j(x: int8) returns (y: int8)
let
  automaton HOLD
    initial state run
    unless
      if x = 0
        restart idle;
    let
      y = fby(x; 2; 3);
    tel
    state idle
    unless
      if x = 1
        restart run;
    let
      y = 0 - 1;
    tel
  returns .. ;
tel
)",
    };

    for (const char* src : programs) {
        CAPTURE(src);
        TypedProgram program = typecheck(parse_program(src));
        TranslationResult translation = translate(program);
        const NodeDecl* node = nullptr;
        for (const auto& n : program.program.nodes)
            if (!n.is_function)
                node = &n;
        REQUIRE(node != nullptr);
        for (uint64_t seed = 0; seed < 30; ++seed) {
            CAPTURE(seed);
            Trace trace = generate_trace(*node, seed, 10);
            DiffReport report = run_lockstep(program, *node, translation, trace);
            CAPTURE(report.cycle);
            CAPTURE(report.name);
            CAPTURE(report.scade_value);
            CAPTURE(report.b_value);
            CHECK(report.equivalent());
        }
    }
}

TEST_CASE("random iterators of every variant run equivalently as machine loops") {
    // the same generated programs the recurrence oracle uses, but executed
    // through the translated WHILE loops; zero loop diagnostics means the
    // synthesized INVARIANT/VARIANT annotations hold at runtime
    int loop_diags = 0;
    for (HofVariant variant : test::all_variants()) {
        CAPTURE(to_string(variant));
        for (uint64_t seed = 0; seed < 8; ++seed) {
            CAPTURE(seed);
            auto generated = test::generate_case(variant, seed);
            CAPTURE(generated.source);
            TypedProgram program = typecheck(parse_program(generated.source));
            TranslationResult translation = translate(program);
            CHECK(validate_machine(translation.machine).empty());
            const NodeDecl& node = program.node("n");

            Trace trace;
            CycleInputs inputs;
            for (int k = 0; k < generated.arrays; ++k) {
                std::vector<Value> cells;
                for (long long c : generated.array_cells[(size_t)k])
                    cells.push_back(Value::make_int(c, INT32_MIN, INT32_MAX));
                inputs["A" + std::to_string(k)] = Value::make_array(std::move(cells));
            }
            trace.cycles.push_back(std::move(inputs));

            DiffReport report = run_lockstep(program, node, translation, trace);
            CAPTURE(report.name);
            CAPTURE(report.scade_value);
            CAPTURE(report.b_value);
            CHECK(report.equivalent());
            CHECK(report.cycles_compared == 1);
            loop_diags += report.loop_diagnostics;
        }
    }
    CHECK(loop_diags == 0);
}

TEST_CASE("trace files round-trip through the canonical format") {
    Pair cs("compute_sum.scade");
    Trace trace = generate_trace(cs.node(), 3, 4);
    std::string text = "# generated\n";
    for (const auto& cycle : trace.cycles) {
        std::vector<std::pair<std::string, Value>> pairs(cycle.begin(), cycle.end());
        text += format_pairs(pairs) + "\n";
    }
    Trace parsed = parse_trace_text(text, cs.node());
    CHECK(parsed.cycles == trace.cycles);
}

TEST_SUITE_END();
