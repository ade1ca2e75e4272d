#include "scb/explore.hpp"

#include "scb/diag.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace scb {

namespace {

std::string state_key(const BState& state) {
    std::string key;
    for (const auto& [name, value] : state.valuation)
        key += name + "=" + value.to_text() + ";";
    return key;
}

/// Finite parameter domain in enumeration order.
std::vector<Value> param_domain(const BMachine& machine, const BOperation& op,
                                const std::string& param, const ExploreOptions& options) {
    auto over = options.int_domains.find(param);
    if (over != options.int_domains.end()) {
        std::vector<Value> out;
        for (long long v = over->second.first; v <= over->second.second; ++v)
            out.push_back(Value::make_int(v, over->second.first, over->second.second));
        return out;
    }

    const BDomain* domain = nullptr;
    for (const auto& conj : op.pre)
        if (conj->kind == BPred::Kind::Member && conj->elem->kind == BExpr::Kind::Ref &&
            conj->elem->name == param)
            domain = conj->domain.get();
    if (!domain)
        throw TranslateError("cannot derive a domain for parameter '" + param + "' of " +
                             op.name);

    auto interval = [&](long long lo, long long hi) {
        if (hi - lo + 1 > options.max_domain)
            throw TranslateError("domain of parameter '" + param + "' has " +
                                 std::to_string(hi - lo + 1) +
                                 " values; supply --domain " + param + "=a..b");
        std::vector<Value> out;
        for (long long v = lo; v <= hi; ++v)
            out.push_back(Value::make_int(v, lo, hi));
        return out;
    };

    switch (domain->kind) {
    case BDomain::Kind::Name: {
        if (domain->name == "BOOL")
            return {Value::make_bool(false), Value::make_bool(true)};
        for (const auto& set : machine.sets) {
            if (set.name == domain->name) {
                std::vector<Value> out;
                for (const auto& m : set.members)
                    out.push_back(Value::make_enum(set.name, m));
                return out;
            }
        }
        for (const auto& prop : machine.properties)
            if (prop.name == domain->name && prop.domain &&
                prop.domain->kind == BDomain::Kind::Interval &&
                prop.domain->lo->kind == BExpr::Kind::IntLit &&
                prop.domain->hi->kind == BExpr::Kind::IntLit)
                return interval(prop.domain->lo->int_val, prop.domain->hi->int_val);
        throw TranslateError("parameter '" + param + "' ranges over '" + domain->name +
                             "', which is not enumerable");
    }
    case BDomain::Kind::Interval:
        if (domain->lo->kind == BExpr::Kind::IntLit && domain->hi->kind == BExpr::Kind::IntLit)
            return interval(domain->lo->int_val, domain->hi->int_val);
        throw TranslateError("parameter '" + param + "' has a non-literal interval domain");
    case BDomain::Kind::TotalFun:
    case BDomain::Kind::StructSet:
        throw TranslateError("parameter '" + param +
                             "' has a composite domain; exploration enumerates scalars only");
    }
    throw TranslateError("parameter '" + param + "' has no usable domain");
}

struct Edge {
    long long parent = -1;
    std::string op;
    std::vector<Value> args;
    std::vector<std::pair<std::string, Value>> outputs;
};

Counterexample build_counterexample(const BMachine& machine, const std::vector<BState>& states,
                                    const std::vector<Edge>& edges, long long leaf,
                                    const InvariantCheck& check) {
    // ids on the path root -> leaf; the root (id 0) carries no edge
    std::vector<long long> path;
    for (long long at = leaf; at > 0; at = edges[(size_t)at].parent)
        path.push_back(at);
    std::reverse(path.begin(), path.end());

    Counterexample cex;
    for (long long id : path) {
        const Edge& e = edges[(size_t)id];
        const BOperation* op = machine.find_operation(e.op);
        CexStep step;
        step.op = e.op;
        for (size_t i = 0; i < e.args.size(); ++i)
            step.args.emplace_back(op->params[i], e.args[i]);
        step.outputs = e.outputs;
        step.post = states[(size_t)id];
        cex.steps.push_back(std::move(step));
    }
    cex.failing_conjunct = check.failing_conjunct;
    cex.rendering = check.rendering;
    cex.final_state = states[(size_t)leaf];
    return cex;
}

} // namespace

ExploreResult explore(const BMachine& machine, const ExploreOptions& options) {
    ExploreResult result;
    result.bound = options.max_states;

    InvokeOptions invoke_options;
    invoke_options.defer_machine_invariant = true;
    invoke_options.types = options.types;

    // parameter domains, fixed before the search starts
    std::map<std::string, std::vector<std::vector<Value>>> domains;
    for (const auto& op : machine.operations) {
        std::vector<std::vector<Value>> per_param;
        for (const auto& p : op.params)
            per_param.push_back(param_domain(machine, op, p, options));
        domains.emplace(op.name, std::move(per_param));
    }

    BState init = init_machine(machine, options.types, /*check=*/false);
    {
        InvariantCheck check = check_invariant(machine, init);
        if (!check.holds) {
            result.kind = ExploreResult::Kind::Violation;
            result.states_visited = 1;
            Counterexample cex;
            cex.failing_conjunct = check.failing_conjunct;
            cex.rendering = check.rendering;
            cex.final_state = init;
            result.counterexample = std::move(cex);
            return result;
        }
    }

    std::vector<BState> states{init};
    std::vector<Edge> edges{Edge{}};
    std::map<std::string, long long> seen{{state_key(init), 0}};
    std::deque<long long> frontier{0};

    while (!frontier.empty()) {
        long long current = frontier.front();
        frontier.pop_front();

        for (const auto& op : machine.operations) {
            const auto& per_param = domains.at(op.name);
            // lexicographic tuples over the parameter domains
            std::vector<size_t> cursor(per_param.size(), 0);
            bool done = false;
            while (!done) {
                std::vector<Value> args;
                args.reserve(per_param.size());
                for (size_t i = 0; i < per_param.size(); ++i)
                    args.push_back(per_param[i][cursor[i]]);

                InvokeResult r = invoke(machine, states[(size_t)current], op.name, args,
                                        invoke_options);
                bool pre_failed = false;
                for (const auto& d : r.diagnostics)
                    pre_failed = pre_failed || d.kind == BDiagKind::PreViolation;
                if (r.ok && !pre_failed) {
                    ++result.transitions_fired;
                    InvariantCheck check = check_invariant(machine, r.state);
                    std::vector<std::pair<std::string, Value>> outputs;
                    for (const auto& o : op.outputs)
                        outputs.emplace_back(o, r.outputs.at(o));
                    if (!check.holds) {
                        edges.push_back(Edge{current, op.name, args, outputs});
                        states.push_back(r.state);
                        result.kind = ExploreResult::Kind::Violation;
                        result.states_visited = (long long)seen.size();
                        result.counterexample = build_counterexample(
                            machine, states, edges, (long long)edges.size() - 1, check);
                        if (options.collect_states)
                            result.states = std::move(states);
                        return result;
                    }
                    std::string key = state_key(r.state);
                    if (!seen.count(key)) {
                        if ((long long)seen.size() + 1 > options.max_states) {
                            result.kind = ExploreResult::Kind::BoundExceeded;
                            result.states_visited = (long long)seen.size();
                            if (options.collect_states)
                                result.states = std::move(states);
                            return result;
                        }
                        long long id = (long long)states.size();
                        seen.emplace(std::move(key), id);
                        states.push_back(r.state);
                        edges.push_back(Edge{current, op.name, args, outputs});
                        frontier.push_back(id);
                    }
                }
                // advance the tuple cursor
                done = per_param.empty();
                for (size_t i = per_param.size(); i-- > 0;) {
                    if (++cursor[i] < per_param[i].size())
                        break;
                    cursor[i] = 0;
                    if (i == 0)
                        done = true;
                }
            }
        }
    }

    result.kind = ExploreResult::Kind::Verified;
    result.states_visited = (long long)seen.size();
    if (options.collect_states)
        result.states = std::move(states);
    return result;
}

bool replay(const BMachine& machine, const Counterexample& cex, const TypeTable* types) {
    BState state = init_machine(machine, types, /*check=*/false);
    if (!check_invariant(machine, state).holds)
        return cex.steps.empty(); // the violation is the initialisation itself
    InvokeOptions options;
    options.defer_machine_invariant = true;
    options.types = types;
    for (const auto& step : cex.steps) {
        std::vector<Value> args;
        for (const auto& [_, v] : step.args)
            args.push_back(v);
        InvokeResult r = invoke(machine, state, step.op, args, options);
        if (!r.ok)
            return false;
        for (const auto& [name, value] : step.outputs) {
            auto it = r.outputs.find(name);
            if (it == r.outputs.end() || !(it->second == value))
                return false;
        }
        if (!(r.state == step.post))
            return false;
        state = std::move(r.state);
    }
    return !check_invariant(machine, state).holds;
}

} // namespace scb
