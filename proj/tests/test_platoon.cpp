#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plv/agent_syntax.hpp"
#include "plv/platoon.hpp"

using namespace plv;

TEST_CASE("follower program parses and round-trips") {
    AgentProgram p = follower_program();
    CHECK(p.name == "f3");
    CHECK(!p.plans.empty());
    AgentProgram again = parse_program(print_program(p));
    CHECK(again == p);
}

TEST_CASE("follower join plans match the published structure") {
    AgentProgram p = follower_program();
    // request plan: manual controllers, send request, wait for agreement
    const Plan* request = nullptr;
    for (const Plan& plan : p.plans) {
        for (const BodyStep& b : plan.body)
            if (b.kind == BodyStep::Kind::Send && b.term.functor() == "join_req") request = &plan;
    }
    REQUIRE(request != nullptr);
    CHECK(request->trigger_pattern == Term::parse("joining(X, Y)"));
    CHECK(request->body.size() == 4);
    CHECK(request->body[3].kind == BodyStep::Kind::WaitFor);
    CHECK(request->body[3].term == Term::parse("join_agreement(X, Y)"));

    // no controller-off action before leave authorisation: every plan that
    // switches controllers to manual inside the leave flow requires the
    // leave agreement in its guard
    for (const Plan& plan : p.plans) {
        if (plan.trigger_pattern != Term::parse("leave_platoon")) continue;
        bool switches_off = false;
        for (const BodyStep& b : plan.body)
            if (b.kind == BodyStep::Kind::AddGoal && b.term == Term::parse("speed_contr(0)"))
                switches_off = true;
        if (!switches_off) continue;
        bool guarded = false;
        for (const GuardLiteral& g : plan.guard)
            if (g.positive && g.pattern.functor() == "leave_agr") guarded = true;
        CHECK(guarded);
    }
}

TEST_CASE("leader program parses; choreography plans present") {
    AgentProgram p = leader_program();
    CHECK(p.name == "leader");
    int join_plans = 0, leave_plans = 0;
    for (const Plan& plan : p.plans) {
        if (plan.trigger_pattern.functor() == "join_req") ++join_plans;
        if (plan.trigger_pattern.functor() == "leave_req") ++leave_plans;
    }
    CHECK(join_plans == 2);   // rear and mid-platoon variants
    CHECK(leave_plans == 2);  // rear and mid-platoon variants

    // the rear-join plan sends no spacing command
    for (const Plan& plan : p.plans) {
        if (plan.trigger_pattern.functor() != "join_req") continue;
        bool rear = false;
        for (const GuardLiteral& g : plan.guard)
            if (g.positive && g.pattern.functor() == "rear") rear = true;
        bool sends_spacing = false;
        for (const BodyStep& b : plan.body)
            if (b.kind == BodyStep::Kind::Send && b.term.functor() == "set_space_cmd")
                sends_spacing = true;
        if (rear) CHECK(!sends_spacing);
        else CHECK(sends_spacing);
    }
}

TEST_CASE("environment automata are input-enabled for all shipped profiles") {
    for (const EnvProfile& profile :
         {EnvProfile::may_all(), EnvProfile::must_all(),
          EnvProfile::may_all().never("join_agreement"),
          EnvProfile::may_all().never("changed_lane"),
          EnvProfile::may_all().never("joining_distance"),
          EnvProfile::may_all().never("leave_agr")}) {
        for (bool member : {false, true}) {
            CHECK_NOTHROW(vehicle_env(profile, {}, member).validate());
            CHECK_NOTHROW(comms_env(profile, {}, member).validate());
        }
    }
}

TEST_CASE("never-profiles remove exactly the targeted grants") {
    EnvAutomaton never_agr = comms_env(EnvProfile::may_all().never("join_agreement"));
    for (const EnvEdge& e : never_agr.edges) {
        if (e.kind == EnvEdge::Kind::Grant) CHECK(e.pattern.functor() != "join_agreement");
    }
    EnvAutomaton never_dist = vehicle_env(EnvProfile::may_all().never("joining_distance"));
    for (const EnvEdge& e : never_dist.edges) {
        if (e.kind == EnvEdge::Kind::Grant) CHECK(e.pattern.functor() != "joining_distance");
    }
    // must(all) marks every remaining grant as a fairness obligation
    EnvAutomaton must = comms_env(EnvProfile::must_all());
    bool any = false;
    for (const EnvEdge& e : must.edges)
        if (e.kind == EnvEdge::Kind::Grant) {
            CHECK(e.must);
            any = true;
        }
    CHECK(any);
}

TEST_CASE("shipped suite: seven properties with matching scenarios") {
    auto suite = shipped_agent_suite();
    REQUIRE(suite.size() == 7);
    CHECK(suite[0].name == "join_unless_agreement");
    CHECK(suite[6].scenario.member_start);
    for (const auto& c : suite) {
        CHECK(c.formula == parse_formula(c.formula_text));
        CHECK(agents_of(c.formula) == std::vector<std::string>{"f3"});
    }
    // the liveness property runs under the must-everything profile
    CHECK(suite[2].scenario.profile.grant_for("join_agreement") == EnvProfile::Grant::Must);
    CHECK(suite[1].scenario.profile.grant_for("join_agreement") == EnvProfile::Grant::Never);
}

TEST_CASE("spacing constants flow from the configuration into the programs") {
    SpacingConfig cfg;
    cfg.increase = 21;
    cfg.normal = 6;
    AgentProgram p = follower_program(cfg);
    bool found = false;
    for (const Plan& plan : p.plans)
        for (const BodyStep& b : plan.body)
            if (b.kind == BodyStep::Kind::Perform && b.term == Term::parse("set_space(21)"))
                found = true;
    CHECK(found);
}
