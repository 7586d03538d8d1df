#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plv/timed.hpp"
#include "plv/timed_props.hpp"

namespace plv {

struct TimedCheckOptions {
    uint64_t max_states = 10'000'000;
    int workers = 0;
    int cap_extra = 1;  // clock cap = max constant + cap_extra
};

struct TimedVerdict {
    bool holds = true;
    // Violating or witnessing run: transition descriptions paired with the
    // configuration they enter; the first entry is the initial configuration
    // with an empty label.
    std::vector<std::pair<std::string, std::string>> trace;
    std::vector<std::pair<std::string, std::string>> cycle;  // leads-to cycles
    bool deadlock = false;  // leads-to counterexample by dead end
    std::optional<TimedConfig> witness;  // final configuration of the trace
    uint64_t states = 0;
    double wall_ms = 0;
    std::string property;

    bool operator==(const TimedVerdict& o) const { return holds == o.holds; }
};

// Explicit reachable configuration graph with deterministic breadth-first
// ids (each level's new configurations sorted canonically), independent of
// the worker count.
struct TimedGraph {
    std::vector<TimedConfig> configs;
    std::vector<std::vector<std::pair<TimedLabel, int>>> adj;
    std::vector<int> parent;      // BFS tree: predecessor config
    std::vector<TimedLabel> via;  // BFS tree: label from parent

    size_t size() const { return configs.size(); }
};

TimedGraph timed_explore(const NetSemantics& sem, uint64_t max_states, int workers);
TimedGraph timed_explore_serial(const NetSemantics& sem, uint64_t max_states);

// A[] p : breadth-first reachability; counterexample is a shortest
// violating path.
TimedVerdict check_invariant(const TimedNet& net, const StatePred& p,
                             const TimedCheckOptions& opts = {});

// phi --> psi : from every reachable phi-configuration, every path reaches a
// psi-configuration; fails on a psi-avoiding cycle or dead end.
TimedVerdict check_leadsto(const TimedNet& net, const StatePred& phi, const StatePred& psi,
                           const TimedCheckOptions& opts = {});

TimedVerdict check_property(const TimedNet& net, const TimedProperty& p,
                            const TimedCheckOptions& opts = {});

}  // namespace plv
