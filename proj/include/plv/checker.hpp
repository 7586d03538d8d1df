#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plv/buchi.hpp"
#include "plv/formula.hpp"
#include "plv/system.hpp"

namespace plv {

struct CheckOptions {
    uint64_t max_states = 10'000'000;  // explicit inconclusive beyond this
    int workers = 0;                   // 0: library default
    bool fair = true;                  // honor weak-fairness obligations
    int buchi_node_bound = 4096;
};

// Explicit reachable graph of a composed system. State ids are assigned
// breadth-first with each level sorted canonically, so they do not depend on
// the worker count.
struct SystemGraph {
    std::vector<SystemState> states;
    std::vector<std::vector<std::pair<SysLabel, int>>> adj;
    std::vector<bool> agent_enabled;  // cached agent-progress enabledness

    size_t size() const { return states.size(); }
};

SystemGraph explore(const ComposedSystem& sys, uint64_t max_states, int workers);
SystemGraph explore_serial(const ComposedSystem& sys, uint64_t max_states);

// One step of a counterexample: the transition taken, the atom valuation and
// canonical encoding of the state it enters.
struct CexStep {
    SysLabel label;
    std::vector<bool> atoms;
    std::string state_encode;
};

struct Counterexample {
    std::vector<bool> initial_atoms;
    std::string initial_encode;
    std::vector<CexStep> prefix;
    std::vector<CexStep> cycle;  // closes back on the state the prefix ends in

    std::string render(const std::vector<ModalAtom>& atoms) const;
};

struct Verdict {
    bool holds = true;
    std::optional<Counterexample> counterexample;
    uint64_t system_states = 0;
    uint64_t product_states = 0;
    double wall_ms = 0;
    std::string formula;

    bool operator==(const Verdict& o) const { return holds == o.holds; }
};

// Automata-theoretic check of sys |= f: product with ltl_to_buchi(~f), then
// search for a (fair) accepting lasso. Counterexamples are canonical:
// shortest breadth-first prefix, deterministically stitched cycle.
Verdict check(const ComposedSystem& sys, const Formula& f, const CheckOptions& opts = {});

// Re-executes a counterexample through the engine and environments and
// confirms the recorded encodings, atom valuations and the cycle closure.
bool replay(const ComposedSystem& sys, const Formula& f, const Counterexample& cex);

// Product automaton exposed for cross-validation in tests.
struct ProductGraph {
    // node = (system state, buchi state)
    std::vector<std::pair<int, int>> nodes;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (system edge idx, target node)
    std::vector<int> initial;
    std::vector<bool> accepting;

    size_t size() const { return nodes.size(); }
};

ProductGraph build_product(const SystemGraph& g, const ComposedSystem& sys,
                           const BuchiAutomaton& ba, const std::vector<ModalAtom>& atoms);

// Classic nested depth-first search for an accepting lasso (fairness-blind).
bool ndfs_accepting(const ProductGraph& p);

// SCC-based detection; with obligations it reports exactly the existence of
// a weakly-fair accepting lasso.
bool scc_accepting(const ProductGraph& p, const SystemGraph& g, const ComposedSystem& sys,
                   bool fair);

}  // namespace plv
