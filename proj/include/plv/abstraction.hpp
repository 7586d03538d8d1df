#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "plv/checker.hpp"
#include "plv/platoon.hpp"
#include "plv/platoon_timed.hpp"
#include "plv/system.hpp"
#include "plv/timed.hpp"
#include "plv/timed_check.hpp"

namespace plv {

// Untimed finite automaton over string labels; "" marks internal moves.
struct FiniteAutomaton {
    struct Edge {
        int src = 0;
        int dst = 0;
        std::string label;
    };
    std::vector<std::string> states;
    int initial = 0;
    std::vector<Edge> edges;

    std::string serialize() const;
    static FiniteAutomaton deserialize(const std::string& text);

    // Deterministic automaton over the non-internal labels, built by
    // epsilon-closure subset construction; language (prefix-closed trace
    // set) is preserved.
    FiniteAutomaton determinized() const;

    // All label sequences of length <= depth (after treating "" as
    // internal).
    std::set<std::vector<std::string>> bounded_traces(int depth) const;

    bool accepts_trace(const std::vector<std::string>& trace) const;  // on determinized form
};

// Locations become states; guards, resets and delay transitions are erased.
// Sync edges are labeled "chan!" / "chan?", internal edges keep their action
// label (or "" when unnamed). Unreachable states are pruned.
FiniteAutomaton untime(const TimedAutomaton& ta, const std::vector<std::string>& channels = {});

struct ExtractOptions {
    uint64_t max_states = 200000;
    int max_depth = 100000;  // exploration depth bound (graph levels)
    int workers = 0;
};

// Explores program || envs, keeps the observable labels (performs, sends,
// grants, retracts), compresses internal steps and determinizes. Labels:
// "act:<term>", "msg:<content>", "grant:<term>", "retract:<term>".
FiniteAutomaton extract_io(const AgentProgram& program, const std::vector<EnvAutomaton>& envs,
                           const ExtractOptions& opts = {});
FiniteAutomaton extract_io(const CheckScenario& scenario, const ExtractOptions& opts = {});
FiniteAutomaton extract_io_from_system(const ComposedSystem& sys,
                                       const ExtractOptions& opts = {});

// Recipe mapping extracted observables onto a timed net's channel alphabet
// plus the bookkeeping the shipped properties need.
struct LabelMap {
    // observable label -> channel name with direction suffix '!' or '?'
    std::map<std::string, std::string> to_channel;
    // channel event -> clocks to reset (e.g. process_time on join_r!)
    std::map<std::string, std::vector<std::string>> resets;
    // channel event -> variable assignments
    std::map<std::string, std::vector<std::pair<std::string, int>>> updates;

    struct Alias {
        std::string name;
        bool at_event = false;           // committed location right after `at`
        std::string at;                  // channel event for at_event form
        std::set<std::string> after;     // phase begins after any of these
        std::set<std::string> before;    // ...and ends at any of these
    };
    std::vector<Alias> aliases;
};

// Attaches the extracted automaton to a net position: observables map to
// channels, unmapped observables are compressed away, recipe clocks and
// variables are attached. The result has no timing constraints of its own
// except zero-time committed hops introduced for `at` aliases.
TimedAutomaton substitute_agent(const FiniteAutomaton& io, const LabelMap& map,
                                const std::string& name,
                                const std::vector<std::string>& channels);

// The shipped follower recipe for net position i.
LabelMap follower_label_map(int i, const SpacingConfig& spacing = {});

// Extraction scenarios matching the shipped net roles.
CheckScenario extraction_scenario_joiner(const std::string& name);   // joins, then serves
CheckScenario extraction_scenario_full(const std::string& name);     // joins, serves, leaves
CheckScenario extraction_scenario_member(const std::string& name);   // serves only

// The shipped net with its follower agents replaced by extracted automata.
TimedNet substituted_platoon_net(const PlatoonNetConfig& cfg, const ExtractOptions& opts = {});

// Theorem-style composed verification: per-agent modal properties under
// untimed environments, plus the timed suite on the substituted net; the
// composed verdict is the conjunction.
struct ComposedClause {
    std::string id;         // "a" / "b" clauses: per-agent; "c": timed
    std::string component;  // what was checked
    std::string property;
    enum class Outcome { Holds, Fails, Inconclusive } outcome = Outcome::Holds;
    std::string note;
    uint64_t states = 0;
    double wall_ms = 0;
};

struct ComposedReport {
    std::vector<ComposedClause> clauses;
    ComposedClause::Outcome outcome = ComposedClause::Outcome::Holds;

    std::string to_text() const;
};

struct ComposedSpec {
    struct AgentCheck {
        std::string clause;  // "a", "b", ...
        std::string agent;
        CheckScenario scenario;
        std::vector<std::pair<std::string, Formula>> properties;
    };
    std::vector<AgentCheck> agent_checks;
    PlatoonNetConfig net_cfg;
    std::vector<TimedProperty> timed_properties;
    bool use_extracted_agents = true;
};

ComposedSpec default_composed_spec();

ComposedReport verify_composed(const ComposedSpec& spec, const CheckOptions& agent_opts = {},
                               const TimedCheckOptions& timed_opts = {});

}  // namespace plv
