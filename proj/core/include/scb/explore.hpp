#pragma once

#include "scb/b_eval.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace scb {

struct CexStep {
    std::string op;
    std::vector<std::pair<std::string, Value>> args; // parameter order
    std::vector<std::pair<std::string, Value>> outputs;
    BState post;
};

struct Counterexample {
    std::vector<CexStep> steps;
    int failing_conjunct = -1;
    std::string rendering; // failing conjunct text
    BState final_state;
};

struct ExploreResult {
    enum class Kind { Verified, Violation, BoundExceeded };
    Kind kind = Kind::Verified;
    long long states_visited = 0;
    long long transitions_fired = 0;
    long long bound = 0;
    std::optional<Counterexample> counterexample;
    std::vector<BState> states; // filled when requested
};

struct ExploreOptions {
    long long max_states = 1000000;
    bool collect_states = false;
    /// overrides for integer parameters: name -> inclusive range
    std::map<std::string, std::pair<long long, long long>> int_domains;
    const TypeTable* types = nullptr;
    /// refuse to enumerate wider parameter domains than this
    long long max_domain = 65536;
};

/// Breadth-first reachability from the initial state. Successors are every
/// operation (declaration order) applied to every PRE-satisfying argument
/// tuple (lexicographic over the parameter domains derived from PRE typing).
/// The invariant is checked on the initial state and after every transition;
/// the first violation yields the BFS-shortest counterexample. Deterministic.
/// Throws TranslateError when a parameter domain cannot be derived.
ExploreResult explore(const BMachine& machine, const ExploreOptions& options = {});

/// True iff executing the steps from the initial state reproduces every
/// recorded output and post-state and ends in a state violating the
/// invariant.
bool replay(const BMachine& machine, const Counterexample& cex,
            const TypeTable* types = nullptr);

} // namespace scb
