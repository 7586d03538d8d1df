#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plv/term.hpp"

namespace plv {

enum class GoalKind { Achieve, Perform };

std::string to_string(GoalKind k);

// One literal of a plan guard: B t, G t, ~B t or ~G t. Goal literals may be
// annotated with the goal kind they test.
struct GuardLiteral {
    enum class Mod { Belief, Goal };
    Mod mod = Mod::Belief;
    bool positive = true;
    Term pattern;
    std::optional<GoalKind> goal_kind;

    std::string str() const;
    bool operator==(const GuardLiteral&) const = default;
};

struct BodyStep {
    enum class Kind { AddGoal, AddBelief, RemoveBelief, WaitFor, Perform, Send };
    Kind kind = Kind::AddBelief;
    Term term;
    GoalKind goal_kind = GoalKind::Achieve;  // AddGoal only
    Term recipient;                          // Send only: atom or variable
    std::string performative;                // Send only

    std::string str() const;
    bool operator==(const BodyStep&) const = default;
};

struct Plan {
    enum class Trigger { GoalAdded, BeliefAdded };
    Trigger trigger = Trigger::GoalAdded;
    GoalKind trigger_kind = GoalKind::Achieve;  // GoalAdded only
    Term trigger_pattern;
    std::vector<GuardLiteral> guard;
    std::vector<BodyStep> body;

    std::string str() const;
    bool operator==(const Plan&) const = default;
};

struct ReasoningRule {
    Term head;
    std::vector<Term> body;

    std::string str() const;
    bool operator==(const ReasoningRule&) const = default;
};

struct AgentProgram {
    std::string name;
    std::vector<Term> initial_beliefs;
    std::vector<std::pair<Term, GoalKind>> initial_goals;
    std::vector<ReasoningRule> rules;
    std::vector<Plan> plans;  // source order; selection is order-sensitive

    std::string str() const;
    bool operator==(const AgentProgram&) const = default;
};

}  // namespace plv
