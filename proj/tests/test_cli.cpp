#include "scb/b_emit.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

using namespace scb;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout only
};

RunResult run_cli(const std::string& args) {
    std::string command = std::string(SCB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buffer[4096];
    size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0)
        result.output.append(buffer, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string fx(const std::string& name) { return test::fixture_path(name); }

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("translate writes a machine matching the golden file") {
    std::string out = "/tmp/scb_cli_example.mch";
    RunResult r = run_cli("translate " + fx("compute_sum.scade") + " -o " + out);
    CHECK(r.exit_code == 0);
    CHECK(tokenize_machine_text(test::read_file(out)) ==
          tokenize_machine_text(test::read_fixture("compute_sum.golden.mch")));
}

TEST_CASE("translate rejects an instantaneous cycle with exit 1") {
    RunResult r = run_cli("translate " + fx("cyclic.scade") + " -o /tmp/scb_cli_cyclic.mch");
    CHECK(r.exit_code == 1);
}

TEST_CASE("constructs outside the translatable subset exit with code 2") {
    std::string src = "/tmp/scb_cli_nested_if.scade";
    {
        FILE* f = fopen(src.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("node n(c: bool; x: int32) returns (y: int32)\n"
              "let\n  y = 1 + (if c then x else 0);\ntel\n",
              f);
        fclose(f);
    }
    RunResult r = run_cli("translate " + src + " -o /tmp/scb_cli_nested_if.mch");
    CHECK(r.exit_code == 2);
}

TEST_CASE("translate protocol fixtures against their goldens") {
    std::string out = "/tmp/scb_cli_proto.mch";
    RunResult r = run_cli("translate " + fx("protocol_v1.scade") + " -o " + out);
    CHECK(r.exit_code == 0);
    CHECK(tokenize_machine_text(test::read_file(out)) ==
          tokenize_machine_text(test::read_fixture("protocol_v1.golden.mch")));
}

TEST_CASE("the unicode flavor emits glyphs but the same token stream") {
    std::string out = "/tmp/scb_cli_unicode.mch";
    RunResult r = run_cli("translate " + fx("compute_sum.scade") + " --unicode -o " + out);
    CHECK(r.exit_code == 0);
    std::string text = test::read_file(out);
    CHECK(text.find("∈") != std::string::npos);
    CHECK(tokenize_machine_text(text) ==
          tokenize_machine_text(test::read_fixture("compute_sum.golden.mch")));
}

TEST_CASE("simulate --side both over the reference trace is equivalent") {
    RunResult r = run_cli("simulate " + fx("compute_sum.scade") + " --trace " +
                          fx("compute_sum.trace") + " --side both");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("equivalent") != std::string::npos);
}

TEST_CASE("simulate with a seed is deterministic across runs") {
    std::string args = "simulate " + fx("compute_sum.scade") + " --seed 0 --cycles 20 --side both";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("simulate prints per-cycle values in the trace format") {
    RunResult r = run_cli("simulate " + fx("compute_sum.scade") + " --trace " +
                          fx("compute_sum.trace") + " --side scade");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("output=[1,4,9,16,25] fby_out=0") != std::string::npos);
    RunResult b = run_cli("simulate " + fx("compute_sum.scade") + " --trace " +
                          fx("compute_sum.trace") + " --side b");
    CHECK(b.output == r.output);
}

TEST_CASE("check finds the violation in the broken protocol with exit 5") {
    RunResult r = run_cli("check " + fx("protocol_v1.scade"));
    CHECK(r.exit_code == 5);
    CHECK(r.output.find("ConnectRequest") != std::string::npos);
    CHECK(r.output.find("ConnectAck") != std::string::npos);
    CHECK(r.output.find("DisconnectRequest") != std::string::npos);
    CHECK(r.output.find("Disconnecting") != std::string::npos);
}

TEST_CASE("check verifies the repaired protocol with exit 0") {
    RunResult r = run_cli("check " + fx("protocol_v2.scade"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("4 states") != std::string::npos);
    CHECK(r.output.find("verified") != std::string::npos);
}

TEST_CASE("check respects --max-states with exit 6") {
    RunResult r = run_cli("check " + fx("protocol_v2.scade") + " --max-states 1");
    CHECK(r.exit_code == 6);
}

TEST_CASE("check writes the machine-readable counterexample") {
    std::string out = "/tmp/scb_cli_cex.trace";
    RunResult r = run_cli("check " + fx("protocol_v1.scade") + " --cex-out " + out);
    CHECK(r.exit_code == 5);
    std::string text = test::read_file(out);
    CHECK(text.find("op=HandleEvent input_event=ConnectRequest process_enable=false") !=
          std::string::npos);
}

TEST_CASE("a faulting simulation exits with the runtime-error code") {
    // squares of cells above 15 leave uint8
    std::string trace = "/tmp/scb_cli_hot.trace";
    {
        FILE* f = fopen(trace.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("input=[20,0,0,0,0] fby_in=0\n", f);
        fclose(f);
    }
    RunResult scade = run_cli("simulate " + fx("compute_sum.scade") + " --trace " + trace +
                              " --side scade");
    CHECK(scade.exit_code == 4);
    RunResult b = run_cli("simulate " + fx("compute_sum.scade") + " --trace " + trace +
                          " --side b");
    CHECK(b.exit_code == 4);
}

TEST_CASE("--version and --help are available") {
    RunResult v = run_cli("--version");
    CHECK(v.exit_code == 0);
    CHECK(v.output.find("scb") != std::string::npos);
    RunResult h = run_cli("--help");
    CHECK(h.exit_code == 0);
    CHECK(h.output.find("translate") != std::string::npos);
    CHECK(h.output.find("simulate") != std::string::npos);
    CHECK(h.output.find("check") != std::string::npos);
}

TEST_SUITE_END();
