#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plv/agent_syntax.hpp"
#include "plv/bdi.hpp"
#include "plv/platoon.hpp"

using namespace plv;

namespace {

std::set<Term> beliefs(std::initializer_list<const char*> ts) {
    std::set<Term> out;
    for (const char* t : ts) out.insert(Term::parse(t));
    return out;
}

// Runs cycles with percepts injected per cycle by the driver callback.
template <typename Driver>
AgentState run_cycles(AgentState st, const AgentProgram& p, int limit, Driver&& driver) {
    for (int i = 0; i < limit; ++i) {
        StepResult r = step(st, p);
        st = r.state;
        driver(st, r.obs);
    }
    return st;
}

}  // namespace

TEST_CASE("deduce: no rules gives the beliefs back") {
    auto b = beliefs({"a", "b(1)"});
    CHECK(deduce(b, {}) == b);
}

TEST_CASE("deduce: three-rule chain closes transitively") {
    std::vector<ReasoningRule> rules{{Term::parse("a"), {Term::parse("b")}},
                                     {Term::parse("b"), {Term::parse("c")}}};
    auto closure = deduce(beliefs({"c"}), rules);
    CHECK(closure.count(Term::parse("a")));
    CHECK(closure.count(Term::parse("b")));
    CHECK(closure.count(Term::parse("c")));
}

TEST_CASE("deducible: goal instance bound through an open rule variable") {
    std::vector<ReasoningRule> rules{
        {Term::parse("joining(X, Y)"), {Term::parse("name(X)"), Term::parse("platoon_ok")}}};
    auto b = beliefs({"name(f3)", "platoon_ok"});
    CHECK(deducible(Term::parse("joining(f3, f1)"), b, rules));
    CHECK(!deducible(Term::parse("joining(f9, f1)"), b, rules));
    CHECK(deduce(b, rules) == b);  // forward closure cannot ground Y
}

TEST_CASE("perceive enqueues one event per genuinely new percept") {
    AgentProgram p;
    p.name = "f3";
    AgentState st = init_agent(p);
    st = perceive(st, {Term::parse("b1")}, {});
    CHECK(st.events.size() == 1);
    st = perceive(st, {Term::parse("b1")}, {});
    CHECK(st.events.size() == 1);  // duplicate percept adds no event
    CHECK(st == perceive(st, {}, {}));  // no percepts: state unchanged
}

TEST_CASE("perceive wakes an intention suspended on the new belief") {
    AgentProgram p = parse_program(R"(
Name
f3

Initial Goals
g [achieve]

Plans
+!g [achieve] : {}
    <- *join_agreement(f3, f1), +seen;
)");
    AgentState st = init_agent(p);
    StepResult r1 = step(st, p);           // select the plan
    StepResult r2 = step(r1.state, p);     // execute the wait -> suspend
    REQUIRE(r2.state.intentions.size() == 1);
    CHECK(r2.state.intentions[0].suspended);

    AgentState woken = perceive(r2.state, {Term::parse("join_agreement(f3, f1)")}, {});
    CHECK(!woken.intentions[0].suspended);
    CHECK(woken.beliefs.count(Term::parse("join_agreement(f3, f1)")));
}

TEST_CASE("select_plan follows source order and guards") {
    AgentProgram p = follower_program();
    AgentState st = init_agent(p);
    st.beliefs = beliefs({"name(f3)"});
    Event ev{Event::Kind::GoalAdded, Term::parse("joining(f3, f1)"), GoalKind::Achieve};
    st.goals.insert({ev.term, GoalKind::Achieve});

    auto sel = select_plan(st, ev, p);
    REQUIRE(sel.has_value());
    // the join-request plan sends to the leader
    CHECK(p.plans[sel->first].body[2].kind == BodyStep::Kind::Send);

    st.beliefs.insert(Term::parse("join_agreement(f3, f1)"));
    auto sel2 = select_plan(st, ev, p);
    REQUIRE(sel2.has_value());
    CHECK(sel2->first != sel->first);
    CHECK(p.plans[sel2->first].body[2].kind == BodyStep::Kind::Perform);
    CHECK(p.plans[sel2->first].body[2].term == Term::parse("changing_lane(1)"));

    Event other{Event::Kind::GoalAdded, Term::parse("no_such_goal"), GoalKind::Achieve};
    CHECK(!select_plan(st, other, p).has_value());
}

TEST_CASE("send lands in the outbox and the intention advances") {
    AgentProgram p = parse_program(R"(
Name
f3

Initial Goals
g [achieve]

Plans
+!g [achieve] : {}
    <- .send(leader, :tell, hello(f3)), +sent;
)");
    AgentState st = init_agent(p);
    st = step(st, p).state;  // plan selection
    StepResult r = step(st, p);
    REQUIRE(r.obs.message.has_value());
    CHECK(r.obs.message->recipient == "leader");
    CHECK(r.obs.message->content == Term::parse("hello(f3)"));
    CHECK(r.state.outbox.size() == 1);
}

TEST_CASE("quiescent state: empty queue and suspended intentions") {
    AgentProgram p = parse_program(R"(
Name
f3

Initial Goals
g [achieve]

Plans
+!g [achieve] : {}
    <- *never_granted;
)");
    AgentState st = init_agent(p);
    st = step(st, p).state;
    st = step(st, p).state;  // suspends
    CHECK(quiescent(st, p));
    StepResult r = step(st, p);
    AgentState cleared = st;
    cleared.last_action.reset();
    CHECK(r.state == cleared);
}

TEST_CASE("perform goals run inline, once, and are dropped") {
    AgentProgram p = parse_program(R"(
Name
f3

Initial Goals
g [achieve]

Plans
+!g [achieve] : {~B done}
    <- +!act_now [perform], +done;

+!act_now [perform] : {}
    <- perf(thing(1));
)");
    AgentState st = init_agent(p);
    bool performed = false;
    st = run_cycles(st, p, 10, [&](const AgentState& s, const Observables& obs) {
        if (obs.action && *obs.action == Term::parse("perf(thing(1))")) performed = true;
        (void)s;
    });
    CHECK(performed);
    CHECK(st.beliefs.count(Term::parse("done")));
    for (const auto& [g, k] : st.goals) CHECK(k != GoalKind::Perform);
}

TEST_CASE("last_action is set by perform steps only and cleared each cycle") {
    AgentProgram p = parse_program(R"(
Name
f3

Initial Goals
g [achieve]

Plans
+!g [achieve] : {}
    <- perf(a), +b1, +done_marker;
)");
    AgentState st = init_agent(p);
    st = step(st, p).state;  // select plan
    StepResult r = step(st, p);
    REQUIRE(r.state.last_action.has_value());
    CHECK(*r.state.last_action == Term::parse("perf(a)"));
    StepResult r2 = step(r.state, p);
    CHECK(!r2.state.last_action.has_value());  // +b1 step clears it
}

TEST_CASE("achieve goal persists until deducible, then everything is swept") {
    AgentProgram p = parse_program(R"(
Name
f3

Initial Goals
g [achieve]

Reasoning Rules
g :- done

Plans
+!g [achieve] : {~B done}
    <- *go, +done;
)");
    AgentState st = init_agent(p);
    st = step(st, p).state;
    st = step(st, p).state;  // suspended on *go
    CHECK(st.goals.count({Term::parse("g"), GoalKind::Achieve}));

    st = perceive(st, {Term::parse("go")}, {});
    st = step(st, p).state;  // +done executes
    st = step(st, p).state;  // sweep drops the goal
    CHECK(!st.goals.count({Term::parse("g"), GoalKind::Achieve}));
    CHECK(st.intentions.empty());
}

TEST_CASE("achieve goal re-posts its event when the plan completes unachieved") {
    AgentProgram p = parse_program(R"(
Name
f3

Initial Goals
g [achieve]

Reasoning Rules
g :- impossible

Plans
+!g [achieve] : {~B tried}
    <- +tried;

+!g [achieve] : {B tried}
    <- -tried;
)");
    AgentState st = init_agent(p);
    int selections = 0;
    st = run_cycles(st, p, 12, [&](const AgentState&, const Observables& obs) {
        if (obs.note.rfind("plan", 0) == 0) ++selections;
    });
    CHECK(selections >= 3);
    CHECK(st.goals.count({Term::parse("g"), GoalKind::Achieve}));
}

TEST_CASE("determinism: identical inputs give identical outputs") {
    AgentProgram p = follower_program();
    AgentState st = init_agent(p);
    StepResult a = step(st, p);
    StepResult b = step(st, p);
    CHECK(a.state == b.state);
    CHECK(a.state.encode() == b.state.encode());
}

TEST_CASE("full follower run against a granting environment reaches platoon_ok") {
    AgentProgram p = follower_program();
    AgentState st = init_agent(p);

    bool sent_req = false, acked = false;
    st = run_cycles(st, p, 120, [&](AgentState& s, const Observables& obs) {
        if (obs.message && obs.message->content.functor() == "join_req") sent_req = true;
        if (obs.message && obs.message->content == Term::parse("message(f3, joined_succ)"))
            acked = true;
        std::vector<Term> grants;
        if (sent_req) grants.push_back(Term::parse("join_agreement(f3, f1)"));
        if (obs.action && *obs.action == Term::parse("perf(changing_lane(1))"))
            grants.push_back(Term::parse("changed_lane"));
        if (obs.action && *obs.action == Term::parse("perf(speed_contr(1))")) {
            grants.push_back(Term::parse("speed_contr"));
            grants.push_back(Term::parse("joining_distance"));
        }
        if (obs.action && *obs.action == Term::parse("perf(steering_contr(1))"))
            grants.push_back(Term::parse("steering_contr"));
        if (acked) grants.push_back(Term::parse("platoon_m"));
        if (!grants.empty()) s = perceive(s, grants, {});
    });

    CHECK(st.beliefs.count(Term::parse("platoon_ok")));
    CHECK(deducible(Term::parse("joining(f3, f1)"), st.beliefs, p.rules));
    CHECK(st.goals.empty());
}

TEST_CASE("trace log line carries agent, event, step and observables") {
    Observables obs;
    obs.consumed_event = Event{Event::Kind::GoalAdded, Term::parse("g"), GoalKind::Achieve};
    obs.note = "plan 1 selected for +!g[achieve]";
    CHECK(trace_line("f3", obs) ==
          "f3 | ev=+!g[achieve] | step=plan 1 selected for +!g[achieve] | act=- | send=-");
}
