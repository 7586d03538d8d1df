#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plv/agent_syntax.hpp"

using namespace plv;

namespace {

const char* kJoinRequestPlan = R"(
Plans
+!joining(X, Y) [achieve] : {B name(X), ~B join_agreement(X, Y)}
    <- +!speed_contr(0) [perform], +!steering_contr(0) [perform],
       .send(leader, :tell, join_req(X, Y)), *join_agreement(X, Y);
)";

}  // namespace

TEST_CASE("join-request plan parses to the expected structure") {
    AgentProgram p = parse_program(kJoinRequestPlan);
    REQUIRE(p.plans.size() == 1);
    const Plan& plan = p.plans[0];
    CHECK(plan.trigger == Plan::Trigger::GoalAdded);
    CHECK(plan.trigger_kind == GoalKind::Achieve);
    CHECK(plan.trigger_pattern == Term::parse("joining(X, Y)"));

    REQUIRE(plan.guard.size() == 2);
    CHECK(plan.guard[0].mod == GuardLiteral::Mod::Belief);
    CHECK(plan.guard[0].positive);
    CHECK(plan.guard[0].pattern == Term::parse("name(X)"));
    CHECK(!plan.guard[1].positive);
    CHECK(plan.guard[1].pattern == Term::parse("join_agreement(X, Y)"));

    REQUIRE(plan.body.size() == 4);
    CHECK(plan.body[0].kind == BodyStep::Kind::AddGoal);
    CHECK(plan.body[0].goal_kind == GoalKind::Perform);
    CHECK(plan.body[0].term == Term::parse("speed_contr(0)"));
    CHECK(plan.body[1].kind == BodyStep::Kind::AddGoal);
    CHECK(plan.body[1].term == Term::parse("steering_contr(0)"));
    CHECK(plan.body[2].kind == BodyStep::Kind::Send);
    CHECK(plan.body[2].recipient == Term::atom("leader"));
    CHECK(plan.body[2].performative == "tell");
    CHECK(plan.body[2].term == Term::parse("join_req(X, Y)"));
    CHECK(plan.body[3].kind == BodyStep::Kind::WaitFor);
    CHECK(plan.body[3].term == Term::parse("join_agreement(X, Y)"));
}

TEST_CASE("empty text parses to an empty program") {
    AgentProgram p = parse_program("");
    CHECK(p.name.empty());
    CHECK(p.initial_beliefs.empty());
    CHECK(p.initial_goals.empty());
    CHECK(p.rules.empty());
    CHECK(p.plans.empty());
}

TEST_CASE("all sections round-trip through the printer") {
    const char* src = R"(
Name
f3

Initial Beliefs
name(f3)

Initial Goals
platoon_m(f3, f1) [achieve]

Reasoning Rules
joining(X, Y) :- name(X), platoon_ok
platoon_m(X, Y) :- joining(X, Y)

Plans
+!platoon_m(X, Y) [achieve] : {B name(X)}
    <- +!joining(X, Y) [achieve];

+set_space_cmd(Z) : {B name(X), ~G leave_platoon [achieve]}
    <- +!set_spacing(Z) [achieve];

+!demo [achieve] : {}
    <- +done, -pending, perf(set_space(17));
)";
    AgentProgram p = parse_program(src);
    CHECK(p.name == "f3");
    CHECK(p.rules.size() == 2);
    CHECK(p.plans.size() == 3);
    CHECK(p.plans[1].trigger == Plan::Trigger::BeliefAdded);
    CHECK(p.plans[1].guard[1].mod == GuardLiteral::Mod::Goal);
    CHECK(p.plans[1].guard[1].goal_kind == GoalKind::Achieve);

    AgentProgram again = parse_program(print_program(p));
    CHECK(again == p);
    CHECK(print_program(again) == print_program(p));
}

TEST_CASE("syntax errors carry position and token") {
    try {
        parse_program("Plans\n+!g [achieve] : {Q name(X)} <- +b;");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.token == "Q");
    }
}

TEST_CASE("unbound body variables are rejected") {
    CHECK_THROWS_AS(parse_program("Plans\n+!g [achieve] : {} <- perf(a(Z));"), ConfigError);
}

TEST_CASE("variables bound only under negation stay existential") {
    // ~G set_spacing(Z): Z is a wildcard, not a binding occurrence.
    AgentProgram p =
        parse_program("Plans\n+!g(X) [achieve] : {~G set_spacing(Z) [achieve]} <- perf(a(X));");
    CHECK(p.plans.size() == 1);
}
