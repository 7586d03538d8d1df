#pragma once

#include <map>
#include <string>
#include <vector>

#include "plv/agent_ast.hpp"
#include "plv/env.hpp"
#include "plv/formula.hpp"

namespace plv {

// Spacing constants carried in percept payloads and message arguments.
struct SpacingConfig {
    int increase = 17;  // metres opened for a joining vehicle
    int normal = 5;     // cruise spacing
};

// Which percepts the environment may grant, must eventually grant, or never
// grants. Unlisted percepts default to May.
struct EnvProfile {
    enum class Grant { May, Must, Never };
    std::map<std::string, Grant> grants;

    Grant grant_for(const std::string& percept) const {
        auto it = grants.find(percept);
        return it == grants.end() ? Grant::May : it->second;
    }

    static EnvProfile may_all() { return {}; }
    static EnvProfile must_all();
    EnvProfile& set(const std::string& percept, Grant g) {
        grants[percept] = g;
        return *this;
    }
    EnvProfile& never(const std::string& percept) { return set(percept, Grant::Never); }
};

// Concrete platoon agent code. The follower carries the joining plans plus
// the leaving, spacing-service and controller-switch plans; the leader
// handles join/leave requests with slot tokens and relational order
// bookkeeping (no arithmetic in guards).
std::string follower_source(const SpacingConfig& cfg = {});
std::string leader_source(const SpacingConfig& cfg = {});
AgentProgram follower_program(const SpacingConfig& cfg = {});
AgentProgram leader_program(const SpacingConfig& cfg = {});

// Untimed vehicle abstraction: consumes the follower's actions and answers
// with percepts in protocol order, gated by the profile.
EnvAutomaton vehicle_env(const EnvProfile& profile, const SpacingConfig& cfg = {},
                         bool member_start = false);

// Untimed network/leader abstraction for single-agent checking: consumes the
// follower's messages and grants protocol responses, one choreography at a
// time, gated by the profile.
EnvAutomaton comms_env(const EnvProfile& profile, const SpacingConfig& cfg = {},
                       bool member_start = false);

// A named check setup: the agent under verification, its initial-state
// overrides, and the environment profile.
struct CheckScenario {
    std::string name;
    AgentProgram program;
    std::vector<Term> extra_beliefs;
    std::vector<std::pair<Term, GoalKind>> goal_overrides;
    bool replace_goals = false;
    EnvProfile profile;
    bool member_start = false;
    SpacingConfig spacing;

    std::vector<EnvAutomaton> make_envs() const;
};

// Built-in scenarios used by the shipped property suite.
CheckScenario scenario_join(const EnvProfile& profile, const std::string& name);
CheckScenario scenario_leave(const EnvProfile& profile, const std::string& name);

// One shipped agent property with its matching environment profile.
struct AgentPropertyCase {
    std::string name;
    std::string formula_text;
    Formula formula;
    CheckScenario scenario;
};

// The seven shipped follower properties, each paired with the environment
// profile it is meant to be verified under.
std::vector<AgentPropertyCase> shipped_agent_suite();

}  // namespace plv
