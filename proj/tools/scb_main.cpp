// scb: translate a SCADE-subset program into a B abstract machine, simulate
// either side, run both in lock-step, or exhaustively check the machine
// invariant.
//
// exit codes: 0 success/verified/equivalent, 1 frontend error, 2 translation
// error, 3 divergence, 4 runtime error, 5 invariant violation, 6 state bound
// exceeded.

#include "scb/b_emit.hpp"
#include "scb/b_validate.hpp"
#include "scb/explore.hpp"
#include "scb/lockstep.hpp"
#include "scb/parser.hpp"
#include "scb/trace_io.hpp"
#include "scb/translate.hpp"
#include "scb/typecheck.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFrontend = 1;
constexpr int kExitTranslate = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitRuntime = 4;
constexpr int kExitViolation = 5;
constexpr int kExitBound = 6;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded {
    scb::TypedProgram program;
    scb::TranslationResult translation;
};

Loaded load(const std::string& path, const std::string& machine_name) {
    std::string text = read_file(path);
    scb::ScadeProgram parsed;
    scb::TypedProgram typed;
    try {
        parsed = scb::parse_program(text);
        typed = scb::typecheck(std::move(parsed));
    } catch (const scb::FrontendError& e) {
        std::cerr << scb::format_pos(path, e.pos()) << ": " << e.what() << "\n";
        std::exit(kExitFrontend);
    }
    scb::TranslateOptions options;
    options.machine_name = machine_name;
    Loaded out{std::move(typed), {}};
    try {
        out.translation = scb::translate(out.program, options);
    } catch (const scb::TranslateError& e) {
        std::cerr << path << ": translation error: " << e.what() << "\n";
        std::exit(kExitTranslate);
    }
    for (const auto& w : out.translation.warnings)
        std::cerr << path << ": warning: " << w << "\n";
    return out;
}

const scb::NodeDecl& pick_node(const scb::TypedProgram& program, const std::string& requested) {
    const scb::NodeDecl* chosen = nullptr;
    for (const auto& n : program.program.nodes) {
        if (n.is_function || n.body.empty())
            continue;
        if (!requested.empty()) {
            if (n.name == requested)
                return n;
            continue;
        }
        if (chosen) {
            std::cerr << "several nodes defined; pick one with --node\n";
            std::exit(kExitFrontend);
        }
        chosen = &n;
    }
    if (!chosen) {
        std::cerr << (requested.empty() ? "no executable node found"
                                        : "no node named '" + requested + "'")
                  << "\n";
        std::exit(kExitFrontend);
    }
    return *chosen;
}

std::string stem_of(const std::string& path) {
    size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

std::string b_text(const scb::Value& v) {
    if (v.kind() == scb::Value::Kind::Bool)
        return v.as_bool() ? "TRUE" : "FALSE";
    return v.to_text();
}

// ---- translate ----------------------------------------------------------

int cmd_translate(const std::string& input, std::string output, bool unicode,
                  const std::string& machine_name) {
    Loaded loaded = load(input, machine_name);
    if (output.empty())
        output = stem_of(input) + ".mch";
    std::string text = scb::emit_machine(loaded.translation.machine,
                                         unicode ? scb::BFlavor::Unicode : scb::BFlavor::Ascii);
    std::ofstream out(output, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << output << "\n";
        return kExitTranslate;
    }
    out << text;
    return kExitOk;
}

// ---- simulate -----------------------------------------------------------

std::vector<std::pair<std::string, scb::Value>>
state_pairs(const scb::NodeBinding& binding, const scb::NodeState& state) {
    std::vector<std::pair<std::string, scb::Value>> pairs;
    for (const auto& fb : binding.fbys)
        pairs.emplace_back(fb.store_var, scb::Value::make_array(state.fby_buffers.at(fb.fby_id)));
    for (const auto& sm : binding.machines) {
        const std::string& active = state.sm_states.at(sm.machine_name);
        pairs.emplace_back(sm.state_var, scb::Value::make_enum(sm.machine_name, active));
    }
    return pairs;
}

int cmd_simulate(const std::string& input, const std::string& trace_path, uint64_t seed,
                 int cycles, const std::string& side, const std::string& node_name) {
    Loaded loaded = load(input, "");
    const scb::NodeDecl& node = pick_node(loaded.program, node_name);
    const scb::NodeBinding& binding = loaded.translation.binding_for(node.name);

    scb::Trace trace;
    try {
        if (!trace_path.empty())
            trace = scb::parse_trace_text(read_file(trace_path), node, trace_path);
        else
            trace = scb::generate_trace(node, seed, cycles);
    } catch (const scb::FrontendError& e) {
        std::cerr << scb::format_pos(trace_path, e.pos()) << ": " << e.what() << "\n";
        return kExitFrontend;
    }

    if (side == "both") {
        scb::DiffReport report =
            scb::run_lockstep(loaded.program, node, loaded.translation, trace);
        if (report.equivalent()) {
            std::cout << "equivalent: " << report.cycles_compared << " cycles compared, "
                      << report.loop_diagnostics << " loop diagnostics\n";
            return kExitOk;
        }
        const char* kind = report.kind == scb::DiffReport::DivergenceKind::Output
                               ? "output"
                               : report.kind == scb::DiffReport::DivergenceKind::MappedState
                                     ? "mapped state"
                                     : "runtime fault";
        std::cout << "divergent at cycle " << report.cycle << " (" << kind << " " << report.name
                  << "): scade=" << report.scade_value << " b=" << report.b_value << "\n";
        return kExitDivergence;
    }

    try {
        if (side == "scade") {
            scb::NodeState state = scb::init_state(loaded.program, node);
            for (const auto& inputs : trace.cycles) {
                auto outputs = scb::step(loaded.program, node, state, inputs);
                std::vector<std::pair<std::string, scb::Value>> pairs;
                for (const auto& o : node.outputs)
                    pairs.emplace_back(o.name, outputs.at(o.name));
                auto st = state_pairs(binding, state);
                pairs.insert(pairs.end(), st.begin(), st.end());
                std::cout << scb::format_pairs(pairs) << "\n";
            }
            return kExitOk;
        }
        // side == "b"
        const scb::BMachine& machine = loaded.translation.machine;
        scb::BState state = scb::init_machine(machine, &loaded.translation.types);
        scb::InvokeOptions options;
        options.defer_machine_invariant = true;
        options.types = &loaded.translation.types;
        for (const auto& inputs : trace.cycles) {
            std::vector<scb::Value> args;
            for (const auto& in : binding.inputs)
                args.push_back(inputs.at(in));
            scb::InvokeResult r = scb::invoke(machine, state, binding.op_name, args, options);
            if (!r.ok) {
                std::cerr << "runtime error: " << r.diagnostics.front().detail << "\n";
                return kExitRuntime;
            }
            std::vector<std::pair<std::string, scb::Value>> pairs;
            for (const auto& o : binding.outputs)
                pairs.emplace_back(o, r.outputs.at(o));
            for (const auto& fb : binding.fbys)
                pairs.emplace_back(fb.store_var, r.state.valuation.at(fb.store_var));
            for (const auto& sm : binding.machines)
                pairs.emplace_back(sm.state_var, r.state.valuation.at(sm.state_var));
            std::cout << scb::format_pairs(pairs) << "\n";
            state = std::move(r.state);
        }
        return kExitOk;
    } catch (const scb::EvalError& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

// ---- check ----------------------------------------------------------------

std::map<std::string, std::pair<long long, long long>>
parse_domains(const std::vector<std::string>& specs) {
    std::map<std::string, std::pair<long long, long long>> out;
    for (const auto& spec : specs) {
        size_t eq = spec.find('=');
        size_t dots = spec.find("..");
        if (eq == std::string::npos || dots == std::string::npos || dots < eq)
            throw std::runtime_error("--domain expects name=a..b, got '" + spec + "'");
        std::string name = spec.substr(0, eq);
        long long lo = std::stoll(spec.substr(eq + 1, dots - eq - 1));
        long long hi = std::stoll(spec.substr(dots + 2));
        out[name] = {lo, hi};
    }
    return out;
}

int cmd_check(const std::string& input, long long max_states,
              const std::vector<std::string>& domain_specs, const std::string& cex_out) {
    Loaded loaded = load(input, "");
    const scb::BMachine& machine = loaded.translation.machine;

    scb::ExploreOptions options;
    options.max_states = max_states;
    options.types = &loaded.translation.types;
    try {
        options.int_domains = parse_domains(domain_specs);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitFrontend;
    }

    scb::ExploreResult result;
    try {
        result = scb::explore(machine, options);
    } catch (const scb::TranslateError& e) {
        std::cerr << "check: " << e.what() << "\n";
        return kExitTranslate;
    } catch (const scb::EvalError& e) {
        std::cerr << "check: " << e.what() << "\n";
        return kExitRuntime;
    }

    switch (result.kind) {
    case scb::ExploreResult::Kind::Verified:
        std::cout << "verified: " << result.states_visited << " states, "
                  << result.transitions_fired << " transitions\n";
        return kExitOk;
    case scb::ExploreResult::Kind::BoundExceeded:
        std::cout << "bound exceeded: more than " << result.bound << " states\n";
        return kExitBound;
    case scb::ExploreResult::Kind::Violation:
        break;
    }

    const scb::Counterexample& cex = *result.counterexample;
    std::cout << "invariant violation after " << cex.steps.size() << " step(s)\n\n";
    std::cout << "position  transition\n";
    std::cout << "0         ---root---\n";
    std::cout << "1         INITIALISATION\n";
    int position = 2;
    for (const auto& step : cex.steps) {
        std::string call = step.op + "(";
        for (size_t i = 0; i < step.args.size(); ++i) {
            if (i)
                call += ", ";
            call += step.args[i].first + "=" + b_text(step.args[i].second);
        }
        call += ")";
        std::string outs;
        for (const auto& [name, value] : step.outputs) {
            if (!outs.empty())
                outs += ", ";
            outs += b_text(value);
        }
        std::cout << position++ << "         " << call;
        if (!outs.empty())
            std::cout << " --> " << outs;
        std::cout << "\n";
    }
    std::cout << "\nfailing invariant: " << cex.rendering << "\n";
    std::vector<std::pair<std::string, scb::Value>> final_pairs(cex.final_state.valuation.begin(),
                                                                cex.final_state.valuation.end());
    std::cout << "final state: " << scb::format_pairs(final_pairs) << "\n";

    if (!cex_out.empty()) {
        std::ofstream out(cex_out, std::ios::binary);
        out << "# counterexample, one operation per line\n";
        for (const auto& step : cex.steps) {
            std::vector<std::pair<std::string, scb::Value>> pairs;
            for (const auto& [name, value] : step.args)
                pairs.emplace_back(name, value);
            for (const auto& [name, value] : step.outputs)
                pairs.emplace_back(name, value);
            out << "op=" << step.op << " " << scb::format_pairs(pairs) << "\n";
        }
    }
    return kExitViolation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SCADE-subset to B abstract machine translator and checker"};
    app.set_version_flag("--version", "scb 0.1.0");
    app.require_subcommand(1);

    // translate
    std::string tr_input, tr_output, tr_machine;
    bool tr_unicode = false;
    auto* translate = app.add_subcommand("translate", "translate a .scade file to a .mch machine");
    translate->add_option("input", tr_input, "input .scade file")->required();
    translate->add_option("-o,--output", tr_output, "output .mch path (default: input stem)");
    translate->add_flag("--unicode", tr_unicode, "emit mathematical operator glyphs");
    translate->add_option("--machine-name", tr_machine,
                          "machine name (default: --@machine pragma or the node name)");

    // simulate
    std::string si_input, si_trace, si_side = "both", si_node;
    uint64_t si_seed = 0;
    int si_cycles = 10;
    auto* simulate = app.add_subcommand("simulate", "run one or both sides over a trace");
    simulate->add_option("input", si_input, "input .scade file")->required();
    simulate->add_option("--trace", si_trace, "trace file (one cycle per line)");
    simulate->add_option("--seed", si_seed, "seed for a generated trace");
    simulate->add_option("--cycles", si_cycles, "length of the generated trace");
    simulate->add_option("--side", si_side, "scade | b | both")
        ->check(CLI::IsMember({"scade", "b", "both"}));
    simulate->add_option("--node", si_node, "node to simulate (default: the only node)");

    // check
    std::string ck_input, ck_cex_out;
    long long ck_max_states = 1000000;
    std::vector<std::string> ck_domains;
    auto* check = app.add_subcommand("check", "explore the machine's state space");
    check->add_option("input", ck_input, "input .scade file")->required();
    check->add_option("--max-states", ck_max_states, "visited-state bound");
    check->add_option("--domain", ck_domains, "integer parameter domain, name=a..b");
    check->add_option("--cex-out", ck_cex_out, "write the counterexample in trace format");

    CLI11_PARSE(app, argc, argv);

    try {
        if (translate->parsed())
            return cmd_translate(tr_input, tr_output, tr_unicode, tr_machine);
        if (simulate->parsed())
            return cmd_simulate(si_input, si_trace, si_seed, si_cycles, si_side, si_node);
        if (check->parsed())
            return cmd_check(ck_input, ck_max_states, ck_domains, ck_cex_out);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitFrontend;
    }
    return kExitOk;
}
