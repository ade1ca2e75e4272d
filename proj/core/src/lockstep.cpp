#include "scb/lockstep.hpp"

namespace scb {

namespace {

struct SplitMix {
    uint64_t state;

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }
};

Value random_value(const TypeExpr& type, SplitMix& rng) {
    switch (type.kind) {
    case TypeExpr::Kind::Base: {
        if (type.base == BaseType::Bool)
            return Value::make_bool(rng.below(2) == 1);
        long long lo, hi;
        base_type_range(type.base, lo, hi);
        uint64_t span = (uint64_t)(hi - lo) + 1;
        return Value::make_int(lo + (long long)rng.below(span), lo, hi);
    }
    case TypeExpr::Kind::Enum:
        return Value::make_enum(type.name, type.members[rng.below(type.members.size())]);
    case TypeExpr::Kind::Array: {
        std::vector<Value> cells;
        cells.reserve((size_t)type.size);
        for (long long i = 0; i < type.size; ++i)
            cells.push_back(random_value(*type.elem, rng));
        return Value::make_array(std::move(cells));
    }
    case TypeExpr::Kind::Struct: {
        std::vector<std::pair<std::string, Value>> fields;
        for (const auto& [fname, ftype] : type.fields)
            fields.emplace_back(fname, random_value(*ftype, rng));
        return Value::make_record(std::move(fields));
    }
    case TypeExpr::Kind::Named:
        break;
    }
    throw EvalError(EvalErrorKind::Internal, "random value over unresolved type");
}

std::optional<EvalErrorKind> b_fault(const InvokeResult& result) {
    if (result.ok)
        return std::nullopt;
    for (const auto& d : result.diagnostics) {
        if (d.kind == BDiagKind::PreViolation)
            return EvalErrorKind::PreViolation;
        if (d.kind == BDiagKind::RangeError)
            return d.fault;
        if (d.kind == BDiagKind::NonDisjointParallel)
            return EvalErrorKind::Internal;
    }
    return EvalErrorKind::Internal;
}

} // namespace

DiffReport run_lockstep(const TypedProgram& program, const NodeDecl& node,
                        const TranslationResult& translation, const Trace& trace) {
    DiffReport report;
    const NodeBinding& binding = translation.binding_for(node.name);
    const BMachine& machine = translation.machine;

    NodeState scade_state = init_state(program, node);
    BState b_state = init_machine(machine, &translation.types);

    InvokeOptions options;
    options.defer_machine_invariant = true;
    options.types = &translation.types;

    for (size_t t = 0; t < trace.cycles.size(); ++t) {
        const CycleInputs& inputs = trace.cycles[t];
        int cycle = (int)t + 1;

        std::optional<EvalErrorKind> scade_fault;
        CycleValues scade_outputs;
        NodeState next_state = scade_state;
        try {
            scade_outputs = step(program, node, next_state, inputs);
        } catch (const EvalError& e) {
            scade_fault = e.kind();
        }

        std::vector<Value> args;
        for (const auto& in : binding.inputs)
            args.push_back(inputs.at(in));
        InvokeResult b_result = invoke(machine, b_state, binding.op_name, args, options);
        report.loop_diagnostics += b_result.loop_diagnostics();
        std::optional<EvalErrorKind> fault_b = b_fault(b_result);

        auto diverge = [&](DiffReport::DivergenceKind kind, const std::string& name,
                           const std::string& sv, const std::string& bv) {
            report.status = DiffReport::Status::Divergent;
            report.cycle = cycle;
            report.kind = kind;
            report.name = name;
            report.scade_value = sv;
            report.b_value = bv;
        };

        if (scade_fault || fault_b) {
            if (scade_fault && fault_b && *scade_fault == *fault_b) {
                // both sides fail identically: the behaviors agree and the
                // states are no longer defined, so the comparison ends here
                report.cycles_compared = cycle;
                return report;
            }
            diverge(DiffReport::DivergenceKind::Error, "runtime fault",
                    scade_fault ? to_string(*scade_fault) : "no fault",
                    fault_b ? to_string(*fault_b) : "no fault");
            return report;
        }

        for (const auto& out : binding.outputs) {
            const Value& sv = scade_outputs.at(out);
            const Value& bv = b_result.outputs.at(out);
            if (!(sv == bv)) {
                diverge(DiffReport::DivergenceKind::Output, out, sv.to_text(), bv.to_text());
                return report;
            }
        }
        for (const auto& fb : binding.fbys) {
            Value scade_buffer = Value::make_array(next_state.fby_buffers.at(fb.fby_id));
            const Value& store = b_result.state.valuation.at(fb.store_var);
            if (!(scade_buffer == store)) {
                diverge(DiffReport::DivergenceKind::MappedState, fb.store_var,
                        scade_buffer.to_text(), store.to_text());
                return report;
            }
        }
        for (const auto& sm : binding.machines) {
            const std::string& active = next_state.sm_states.at(sm.machine_name);
            const Value& bv = b_result.state.valuation.at(sm.state_var);
            if (bv.kind() != Value::Kind::Enum || bv.enum_member() != active) {
                diverge(DiffReport::DivergenceKind::MappedState, sm.state_var, active,
                        bv.to_text());
                return report;
            }
        }

        scade_state = std::move(next_state);
        b_state = std::move(b_result.state);
        report.cycles_compared = cycle;
    }
    return report;
}

Trace generate_trace(const NodeDecl& node, uint64_t seed, int length) {
    SplitMix rng{seed * 0x2545f4914f6cdd1dULL + 0x9e3779b97f4a7c15ULL};
    Trace trace;
    trace.provenance = "seed " + std::to_string(seed) + ", " + std::to_string(length) + " cycles";
    for (int t = 0; t < length; ++t) {
        CycleInputs cycle;
        for (const auto& in : node.inputs)
            cycle[in.name] = random_value(*in.type, rng);
        trace.cycles.push_back(std::move(cycle));
    }
    return trace;
}

} // namespace scb
