#include "plv/sim.hpp"

#include <random>

namespace plv {

SimResult run_simulation(std::vector<SimAgent> agents, const SimConfig& cfg) {
    SimResult out;
    std::mt19937 rng(cfg.seed);

    struct Live {
        SimAgent def;
        AgentState st;
        std::vector<int> env_locs;
    };
    std::vector<Live> live;
    for (SimAgent& a : agents) {
        Live l{std::move(a), {}, {}};
        l.st = init_agent(l.def.program);
        l.st.name = l.def.id;
        for (const EnvAutomaton& e : l.def.envs) {
            e.validate();
            l.env_locs.push_back(e.initial);
        }
        live.push_back(std::move(l));
    }

    auto deliver = [&](const Message& m) {
        for (Live& l : live) {
            if (l.def.id != m.recipient) continue;
            l.st = perceive(l.st, {m.content}, {});
            return true;
        }
        return false;
    };

    for (int stepno = 0; stepno < cfg.steps; ++stepno) {
        for (Live& l : live) {
            // Environment machines fire one enabled grant/retract each, with
            // a seeded rotation over the enabled edges.
            for (size_t ei = 0; ei < l.def.envs.size(); ++ei) {
                const EnvAutomaton& env = l.def.envs[ei];
                auto outs = env.output_edges(l.env_locs[ei]);
                if (outs.empty()) continue;
                int pick = outs.size() == 1
                               ? outs[0]
                               : outs[rng() % outs.size()];
                const EnvEdge& edge = env.edges[pick];
                if (edge.kind == EnvEdge::Kind::Grant)
                    l.st = perceive(l.st, {edge.pattern}, edge.also_retract);
                else
                    l.st = perceive(l.st, {}, {edge.pattern});
                l.env_locs[ei] = edge.dst;
            }

            StepResult r = step(l.st, l.def.program);
            l.st = r.state;
            out.trace.push_back(trace_line(l.def.id, r.obs));

            if (r.obs.action) {
                // actions are consumed by the agent's own machines
                for (size_t ei = 0; ei < l.def.envs.size(); ++ei) {
                    const EnvAutomaton& env = l.def.envs[ei];
                    if (!env.owns_action(*r.obs.action)) continue;
                    auto edges = env.consuming_edges(l.env_locs[ei], *r.obs.action, false);
                    if (edges.empty())
                        throw ConfigError(env.name + " cannot consume " + r.obs.action->str());
                    l.env_locs[ei] = env.edges[edges[0]].dst;
                }
            }
            while (!l.st.outbox.empty()) {
                Message m = l.st.outbox.front();
                l.st.outbox.pop_front();
                bool sent = deliver(m);
                if (!sent) {
                    // message to an environment-backed peer: comms machines
                    for (size_t ei = 0; ei < l.def.envs.size(); ++ei) {
                        const EnvAutomaton& env = l.def.envs[ei];
                        if (!env.owns_message(m.content)) continue;
                        auto edges = env.consuming_edges(l.env_locs[ei], m.content, true);
                        if (edges.empty())
                            throw ConfigError(env.name + " cannot consume " + m.str());
                        l.env_locs[ei] = env.edges[edges[0]].dst;
                        sent = true;
                        break;
                    }
                }
                if (!sent)
                    throw ConfigError("message to unknown recipient: " + m.str());
            }
        }
    }
    for (Live& l : live) out.final_states.push_back(std::move(l.st));
    return out;
}

std::vector<SimAgent> default_sim_agents(const SpacingConfig& spacing) {
    std::vector<SimAgent> agents;

    SimAgent leader;
    leader.id = "leader";
    leader.program = leader_program(spacing);
    // scenario bookkeeping: f1 is the platoon anchor, room for two more
    leader.program.initial_beliefs.push_back(Term::parse("member(f1)"));
    leader.program.initial_beliefs.push_back(Term::parse("rear(f1)"));
    leader.program.initial_beliefs.push_back(Term::parse("behind(leader, f1)"));
    leader.program.initial_beliefs.push_back(Term::parse("slot(s2)"));
    leader.program.initial_beliefs.push_back(Term::parse("slot(s3)"));
    agents.push_back(std::move(leader));

    SimAgent f3;
    f3.id = "f3";
    f3.program = follower_program(spacing);
    // the follower's vehicle machines answer its actions eagerly
    f3.envs = {vehicle_env(EnvProfile::must_all(), spacing, false)};
    agents.push_back(std::move(f3));

    return agents;
}

std::vector<SimAgent> profiled_sim_agents(const CheckScenario& scenario) {
    SimAgent a;
    a.id = scenario.program.name;
    a.program = scenario.program;
    for (const Term& b : scenario.extra_beliefs) a.program.initial_beliefs.push_back(b);
    if (scenario.replace_goals) a.program.initial_goals.clear();
    for (const auto& g : scenario.goal_overrides) a.program.initial_goals.push_back(g);
    a.envs = scenario.make_envs();
    return {std::move(a)};
}

}  // namespace plv
