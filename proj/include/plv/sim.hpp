#pragma once

#include <string>
#include <vector>

#include "plv/bdi.hpp"
#include "plv/env.hpp"
#include "plv/platoon.hpp"

namespace plv {

// Deterministic round-robin simulation: several agents exchange messages
// directly; each follower has its vehicle machines; environment grants fire
// eagerly, with a seeded rotation breaking ties between simultaneously
// enabled grant edges of one automaton.
struct SimConfig {
    int steps = 200;
    unsigned seed = 0;
};

struct SimAgent {
    std::string id;
    AgentProgram program;
    std::vector<EnvAutomaton> envs;  // private machines (vehicle)
};

struct SimResult {
    std::vector<std::string> trace;  // one line per agent cycle
    std::vector<AgentState> final_states;
};

SimResult run_simulation(std::vector<SimAgent> agents, const SimConfig& cfg);

// The default platoon simulation: leader plus the follower f3 joining at the
// rear of {f1}.
std::vector<SimAgent> default_sim_agents(const SpacingConfig& spacing = {});

// Profile-driven single-agent simulation (environment-backed, as in the
// checker) used by `run --profile`.
std::vector<SimAgent> profiled_sim_agents(const CheckScenario& scenario);

}  // namespace plv
