#include "plv/system.hpp"

#include <algorithm>
#include <sstream>

#include "plv/diagnostics.hpp"

namespace plv {

std::string SystemState::encode() const {
    std::ostringstream os;
    os << agent.encode() << "@";
    for (int l : env_locs) os << l << ",";
    return os.str();
}

std::string SysLabel::str() const { return text; }

namespace {

// Environment automata react to an agent observable by consuming it in every
// automaton that owns it; the combinations of matching edges multiply.
void sync_combinations(const ComposedSystem& sys, const SystemState& base,
                       const AgentState& stepped, const Term& observable, bool is_message,
                       const std::string& note,
                       std::vector<std::pair<SysLabel, SystemState>>& out) {
    std::vector<int> owners;
    for (size_t i = 0; i < sys.envs.size(); ++i) {
        bool owns = is_message ? sys.envs[i].owns_message(observable)
                               : sys.envs[i].owns_action(observable);
        if (owns) owners.push_back(static_cast<int>(i));
    }
    if (owners.empty())
        throw ConfigError("no environment consumes " + observable.str() +
                          " (input-enabledness violated)");
    std::vector<std::vector<int>> choices;
    for (int i : owners) {
        auto edges = sys.envs[i].consuming_edges(base.env_locs[i], observable, is_message);
        if (edges.empty())
            throw ConfigError(sys.envs[i].name + " cannot consume " + observable.str() +
                              " at location " +
                              sys.envs[i].locations[base.env_locs[i]]);
        choices.push_back(std::move(edges));
    }
    std::vector<size_t> pick(owners.size(), 0);
    while (true) {
        SystemState next;
        next.agent = stepped;
        next.env_locs = base.env_locs;
        SysLabel label;
        label.kind = SysLabel::Kind::AgentStep;
        label.text = note;
        if (is_message)
            label.message_content = observable;
        else
            label.action = observable;
        for (size_t c = 0; c < owners.size(); ++c) {
            int env = owners[c];
            int edge = choices[c][pick[c]];
            next.env_locs[env] = sys.envs[env].edges[edge].dst;
            label.syncs.emplace_back(env, edge);
        }
        out.emplace_back(std::move(label), std::move(next));
        size_t j = 0;
        for (; j < pick.size(); ++j) {
            if (++pick[j] < choices[j].size()) break;
            pick[j] = 0;
        }
        if (j == pick.size()) break;
    }
}

}  // namespace

std::vector<std::pair<SysLabel, SystemState>> ComposedSystem::successors(
    const SystemState& s) const {
    std::vector<std::pair<SysLabel, SystemState>> out;

    // Agent step (at most one per state; the engine is deterministic).
    StepResult r = step(s.agent, program);
    AgentState cleared = s.agent;
    cleared.last_action.reset();
    bool agent_moves = !(r.state == cleared) || r.obs.action || r.obs.message;
    if (agent_moves) {
        AgentState stepped = r.state;
        std::string note = trace_line(program.name, r.obs);
        if (r.obs.action) {
            // the outbox is drained synchronously in checked systems
            sync_combinations(*this, s, stepped, *r.obs.action, false, note, out);
        } else if (r.obs.message) {
            Term content = r.obs.message->content;
            stepped.outbox.clear();
            sync_combinations(*this, s, stepped, content, true, note, out);
        } else {
            SystemState next;
            next.agent = std::move(stepped);
            next.env_locs = s.env_locs;
            SysLabel label;
            label.kind = SysLabel::Kind::AgentStep;
            label.text = note;
            out.emplace_back(std::move(label), std::move(next));
        }
    }

    // Environment output moves: grant or retract one percept.
    for (size_t i = 0; i < envs.size(); ++i) {
        for (int ei : envs[i].output_edges(s.env_locs[i])) {
            const EnvEdge& e = envs[i].edges[ei];
            SystemState next;
            next.env_locs = s.env_locs;
            next.env_locs[i] = e.dst;
            if (e.kind == EnvEdge::Kind::Grant)
                next.agent = perceive(s.agent, {e.pattern}, e.also_retract);
            else
                next.agent = perceive(s.agent, {}, {e.pattern});
            SysLabel label;
            label.kind = SysLabel::Kind::EnvMove;
            label.env_index = static_cast<int>(i);
            label.edge_index = ei;
            label.text = envs[i].name + ": " + e.name;
            out.emplace_back(std::move(label), std::move(next));
        }
    }

    if (out.empty()) {
        SystemState next = s;
        next.agent.last_action.reset();
        SysLabel label;
        label.kind = SysLabel::Kind::Stutter;
        label.text = "stutter";
        out.emplace_back(std::move(label), std::move(next));
    }
    return out;
}

std::optional<SystemState> ComposedSystem::apply(const SystemState& s,
                                                 const SysLabel& label) const {
    for (auto& [l, t] : successors(s)) {
        if (l == label) return t;
    }
    return std::nullopt;
}

std::vector<ComposedSystem::Obligation> ComposedSystem::obligations() const {
    std::vector<Obligation> out;
    if (fair_agent) out.push_back({Obligation::Kind::AgentProgress, -1, -1});
    for (size_t i = 0; i < envs.size(); ++i) {
        std::vector<bool> has_must(envs[i].locations.size(), false);
        for (const EnvEdge& e : envs[i].edges)
            if (e.must && (e.kind == EnvEdge::Kind::Grant || e.kind == EnvEdge::Kind::Retract))
                has_must[e.src] = true;
        for (size_t l = 0; l < has_must.size(); ++l)
            if (has_must[l])
                out.push_back({Obligation::Kind::EnvMust, static_cast<int>(i),
                               static_cast<int>(l)});
    }
    return out;
}

bool ComposedSystem::obligation_enabled(const Obligation& o, const SystemState& s) const {
    if (o.kind == Obligation::Kind::AgentProgress) {
        StepResult r = step(s.agent, program);
        AgentState cleared = s.agent;
        cleared.last_action.reset();
        return !(r.state == cleared) || r.obs.action.has_value() || r.obs.message.has_value();
    }
    return s.env_locs[o.env_index] == o.location;
}

bool ComposedSystem::label_discharges(const Obligation& o, const SysLabel& label) const {
    if (o.kind == Obligation::Kind::AgentProgress) return label.kind == SysLabel::Kind::AgentStep;
    if (label.kind != SysLabel::Kind::EnvMove || label.env_index != o.env_index) return false;
    const EnvEdge& e = envs[o.env_index].edges[label.edge_index];
    return e.src == o.location && e.must;
}

std::string ComposedSystem::Obligation::str(const ComposedSystem& sys) const {
    if (kind == Kind::AgentProgress) return "agent progress";
    return sys.envs[env_index].name + " must-edges at " +
           sys.envs[env_index].locations[location];
}

bool eval_atom(const SystemState& s, const ModalAtom& atom, const ComposedSystem& sys) {
    if (atom.agent != sys.program.name)
        throw ConfigError("unknown agent in atom: " + atom.str());
    const AgentState& st = s.agent;
    switch (atom.mod) {
        case AtomMod::Belief:
            return deducible(atom.term, st.beliefs, sys.program.rules);
        case AtomMod::Goal:
            for (const auto& [g, k] : st.goals)
                if (unify(atom.term, g)) return true;
            return false;
        case AtomMod::Does:
            return st.last_action && unify(atom.term, *st.last_action).has_value();
        case AtomMod::IntendsToDo:
            for (const Intention& in : st.intentions) {
                if (in.suspended) continue;
                for (const Frame& f : in.frames) {
                    const Plan& plan = sys.program.plans[f.plan_index];
                    for (size_t pc = f.pc; pc < plan.body.size(); ++pc) {
                        const BodyStep& bs = plan.body[pc];
                        if (bs.kind == BodyStep::Kind::Perform) {
                            Term t = Term::compound("perf", {f.subst.apply(bs.term)});
                            if (unify(atom.term, t)) return true;
                        } else if (bs.kind == BodyStep::Kind::Send) {
                            Term t = Term::compound(
                                "send", {f.subst.apply(bs.recipient),
                                         Term::atom(bs.performative), f.subst.apply(bs.term)});
                            if (unify(atom.term, t)) return true;
                        }
                    }
                }
            }
            return false;
    }
    return false;
}

ComposedSystem compose(const AgentProgram& program, std::vector<EnvAutomaton> envs,
                       const std::vector<Term>& extra_beliefs,
                       const std::vector<std::pair<Term, GoalKind>>& goal_overrides,
                       bool replace_goals) {
    ComposedSystem sys;
    sys.program = program;
    if (replace_goals) {
        sys.program.initial_goals.clear();
        for (const auto& g : goal_overrides) sys.program.initial_goals.push_back(g);
    } else {
        for (const auto& g : goal_overrides) sys.program.initial_goals.push_back(g);
    }
    for (const Term& b : extra_beliefs) sys.program.initial_beliefs.push_back(b);
    sys.envs = std::move(envs);
    for (const EnvAutomaton& e : sys.envs) e.validate();
    sys.initial.agent = init_agent(sys.program);
    for (const EnvAutomaton& e : sys.envs) sys.initial.env_locs.push_back(e.initial);
    return sys;
}

}  // namespace plv
