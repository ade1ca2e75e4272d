#include "scb/b_eval.hpp"
#include "scb/explore.hpp"
#include "scb/lockstep.hpp"
#include "scb/parser.hpp"
#include "scb/translate.hpp"
#include "scb/typecheck.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

namespace {

std::string read_fixture(const char* name) {
    std::ifstream in(std::string(SCB_FIXTURES_DIR) + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string& compute_sum_text() {
    static std::string text = read_fixture("compute_sum.scade");
    return text;
}

const scb::TypedProgram& compute_sum_program() {
    static scb::TypedProgram program =
        scb::typecheck(scb::parse_program(compute_sum_text()));
    return program;
}

const scb::TranslationResult& compute_sum_translation() {
    static scb::TranslationResult translation = scb::translate(compute_sum_program());
    return translation;
}

void BM_Parse(benchmark::State& state) {
    for (auto _ : state) {
        auto program = scb::parse_program(compute_sum_text());
        benchmark::DoNotOptimize(program);
    }
}
BENCHMARK(BM_Parse);

void BM_Translate(benchmark::State& state) {
    const auto& program = compute_sum_program();
    for (auto _ : state) {
        auto translation = scb::translate(program);
        benchmark::DoNotOptimize(translation);
    }
}
BENCHMARK(BM_Translate);

// inputs kept below 16 so squares stay inside uint8
scb::CycleInputs small_cycle(uint64_t salt) {
    std::vector<scb::Value> cells;
    for (int i = 0; i < 5; ++i)
        cells.push_back(scb::Value::make_int((long long)((salt + (uint64_t)i * 7) % 16), 0, 255));
    scb::CycleInputs inputs;
    inputs["input"] = scb::Value::make_array(std::move(cells));
    inputs["fby_in"] = scb::Value::make_int((long long)(salt % 256), 0, 255);
    return inputs;
}

void BM_ScadeCycle(benchmark::State& state) {
    const auto& program = compute_sum_program();
    const auto& node = program.node("ComputeSum");
    auto inputs = small_cycle(7);
    auto node_state = scb::init_state(program, node);
    for (auto _ : state) {
        auto fresh = node_state;
        auto outputs = scb::step(program, node, fresh, inputs);
        benchmark::DoNotOptimize(outputs);
    }
}
BENCHMARK(BM_ScadeCycle);

void BM_BInvokeCycle(benchmark::State& state) {
    const auto& translation = compute_sum_translation();
    const auto& binding = translation.binding_for("ComputeSum");
    auto inputs = small_cycle(7);
    auto b_state = scb::init_machine(translation.machine, &translation.types);
    std::vector<scb::Value> args;
    for (const auto& in : binding.inputs)
        args.push_back(inputs.at(in));
    scb::InvokeOptions options;
    options.defer_machine_invariant = true;
    options.types = &translation.types;
    for (auto _ : state) {
        auto result = scb::invoke(translation.machine, b_state, "ComputeSum", args, options);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_BInvokeCycle);

void BM_Lockstep20(benchmark::State& state) {
    const auto& program = compute_sum_program();
    const auto& node = program.node("ComputeSum");
    const auto& translation = compute_sum_translation();
    scb::Trace trace;
    for (uint64_t t = 0; t < 20; ++t)
        trace.cycles.push_back(small_cycle(t));
    for (auto _ : state) {
        auto report = scb::run_lockstep(program, node, translation, trace);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_Lockstep20);

void BM_ExploreProtocol(benchmark::State& state) {
    static scb::TypedProgram program =
        scb::typecheck(scb::parse_program(read_fixture("protocol_v2.scade")));
    static scb::TranslationResult translation = scb::translate(program);
    scb::ExploreOptions options;
    options.types = &translation.types;
    for (auto _ : state) {
        auto result = scb::explore(translation.machine, options);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_ExploreProtocol);

} // namespace

BENCHMARK_MAIN();
