#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plv/agent_ast.hpp"
#include "plv/bdi.hpp"
#include "plv/env.hpp"
#include "plv/formula.hpp"

namespace plv {

// Global state of one agent composed with its environment automata. Message
// and action hand-over is synchronous (the producing agent step and the
// consuming environment edges form one transition), so no channel buffers
// are part of the state.
struct SystemState {
    AgentState agent;
    std::vector<int> env_locs;

    std::string encode() const;
    bool operator==(const SystemState&) const = default;
};

// Transition label with enough detail to replay the move deterministically.
struct SysLabel {
    enum class Kind { AgentStep, EnvMove, Stutter };
    Kind kind = Kind::Stutter;
    std::string text;
    int env_index = -1;                      // EnvMove
    int edge_index = -1;                     // EnvMove
    std::vector<std::pair<int, int>> syncs;  // AgentStep: (env, edge) consuming the observable
    std::optional<Term> action;              // AgentStep observables
    std::optional<Term> message_content;

    std::string str() const;
    bool operator==(const SysLabel&) const = default;
};

struct ComposedSystem {
    AgentProgram program;
    std::vector<EnvAutomaton> envs;
    SystemState initial;
    // Weak process fairness for the agent: runs may not starve an enabled
    // agent forever.
    bool fair_agent = true;

    std::vector<std::pair<SysLabel, SystemState>> successors(const SystemState& s) const;
    std::optional<SystemState> apply(const SystemState& s, const SysLabel& label) const;

    // Weak-fairness obligations: the agent's progress, plus one obligation
    // per environment location having must-edges.
    struct Obligation {
        enum class Kind { AgentProgress, EnvMust };
        Kind kind = Kind::AgentProgress;
        int env_index = -1;
        int location = -1;

        std::string str(const ComposedSystem& sys) const;
    };
    std::vector<Obligation> obligations() const;
    bool obligation_enabled(const Obligation& o, const SystemState& s) const;
    bool label_discharges(const Obligation& o, const SysLabel& label) const;
};

// Modal atom valuation on a system state. B consults the deductive closure;
// G the active goals; D the action performed on the step entering the state;
// ItD the pending perform/send steps of non-suspended intentions.
bool eval_atom(const SystemState& s, const ModalAtom& atom, const ComposedSystem& sys);

// Builds the composed system for a scenario-style setup.
struct CheckScenario;  // platoon.hpp
ComposedSystem compose(const AgentProgram& program, std::vector<EnvAutomaton> envs,
                       const std::vector<Term>& extra_beliefs = {},
                       const std::vector<std::pair<Term, GoalKind>>& goal_overrides = {},
                       bool replace_goals = false);

}  // namespace plv
