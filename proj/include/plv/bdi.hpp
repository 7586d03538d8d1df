#pragma once

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plv/agent_ast.hpp"
#include "plv/term.hpp"

namespace plv {

struct Event {
    enum class Kind { BeliefAdded, GoalAdded };
    Kind kind = Kind::BeliefAdded;
    Term term;
    GoalKind goal_kind = GoalKind::Achieve;

    std::string str() const;
    bool operator==(const Event&) const = default;
};

struct Message {
    std::string sender;
    std::string recipient;
    std::string performative;  // "tell"
    Term content;

    std::string str() const;
    bool operator==(const Message&) const = default;
};

// One frame of an intention: a plan body under the substitution accumulated
// from trigger unification, guard bindings and wait-ups.
struct Frame {
    int plan_index = -1;
    size_t pc = 0;
    Subst subst;
    // Perform-subgoal frames own their goal-set entry and retract it on pop.
    std::optional<std::pair<Term, GoalKind>> owns_goal;

    bool operator==(const Frame&) const = default;
};

struct Intention {
    std::vector<Frame> frames;  // stack; back() is executing
    bool suspended = false;
    Term wait_pattern;  // meaningful while suspended
    // The achieve goal this intention was created for (instantiated), if any.
    std::optional<Term> root_goal;
    // Identity of the root plan instance, used to avoid spawning a second
    // intention for the same (plan, bindings) while one is still alive.
    std::string birth_sig;

    bool operator==(const Intention&) const = default;
};

struct AgentState {
    std::string name;
    std::set<Term> beliefs;  // ground
    std::set<std::pair<Term, GoalKind>> goals;
    std::deque<Event> events;  // deduplicated FIFO
    std::vector<Intention> intentions;
    size_t rr_cursor = 0;  // round-robin position for intention execution
    std::optional<Term> last_action;
    std::deque<Message> outbox;

    std::string encode() const;  // canonical, injective on reachable states
    bool operator==(const AgentState&) const = default;
};

// What one cycle made observable: at most one performed action and one sent
// message, plus a human-readable note for trace logs.
struct Observables {
    std::optional<Term> action;
    std::optional<Message> message;
    std::optional<Event> consumed_event;
    std::string note;
};

struct StepResult {
    AgentState state;
    Observables obs;
};

AgentState init_agent(const AgentProgram& program);

// Belief update: adds/removes ground percepts, enqueues a belief-added event
// per genuinely new belief, wakes suspended intentions whose wait pattern
// unifies with a new belief. Clears last_action.
AgentState perceive(const AgentState& st, const std::vector<Term>& adds,
                    const std::vector<Term>& removes);

// Goal-directed deduction: t follows from the beliefs via the reasoning
// rules (unification-based backward chaining, depth-bounded).
bool deducible(const Term& t, const std::set<Term>& beliefs,
               const std::vector<ReasoningRule>& rules, int depth_bound = 64);

// Forward-chaining least fixpoint of ground rule instances. Rules whose head
// variables stay unbound after matching the body contribute nothing here;
// goal instances are checked with deducible() instead.
std::set<Term> deduce(const std::set<Term>& beliefs, const std::vector<ReasoningRule>& rules,
                      int iteration_bound = 1000);

// First plan in source order whose trigger unifies with the event and whose
// guard is satisfied, skipping plans with an identical live instance.
std::optional<std::pair<int, Subst>> select_plan(const AgentState& st, const Event& ev,
                                                 const AgentProgram& program);

// Guard satisfaction under a seed substitution; first solution in a
// deterministic order, or nullopt.
std::optional<Subst> solve_guard(const AgentState& st, const std::vector<GuardLiteral>& guard,
                                 const Subst& seed, const AgentProgram& program);

// One reasoning cycle: sweep achieved goals, then process one event (plan
// selection) or, failing that, execute one body step of the round-robin-next
// active intention.
StepResult step(const AgentState& st, const AgentProgram& program);

bool quiescent(const AgentState& st, const AgentProgram& program);

// Trace log line: agent, consumed event, executed step, observables.
std::string trace_line(const std::string& agent, const Observables& obs);

}  // namespace plv
