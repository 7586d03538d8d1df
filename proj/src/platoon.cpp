#include "plv/platoon.hpp"

#include <algorithm>

#include "plv/agent_syntax.hpp"
#include "plv/diagnostics.hpp"

namespace plv {

EnvProfile EnvProfile::must_all() {
    EnvProfile p;
    for (const char* key :
         {"join_agreement", "platoon_m", "set_space_cmd", "leave_agr", "leave_wish",
          "changed_lane", "left_lane", "speed_contr", "steering_contr", "joining_distance",
          "spacing_done"})
        p.grants[key] = Grant::Must;
    return p;
}

namespace {

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

// The joining plans follow the follower vehicle's published decision code;
// the leaving plans implement the leave procedure (request, authorisation,
// spacing, manual hand-back, lane change, acknowledgement). Spacing-service
// and controller plans round out the protocol surface.
const char* kFollowerTemplate = R"(Name
f3

Initial Beliefs
name(f3)

Initial Goals
platoon_m(f3, f1) [achieve]

Reasoning Rules
joining(X, Y) :- name(X), platoon_ok
platoon_m(X, Y) :- joining(X, Y)
closing_enough :- joining_distance
set_spacing(Z) :- spacing_acked(Z)
leave_platoon :- left_ok

Plans
# membership is achieved by carrying out the joining procedure
+!platoon_m(X, Y) [achieve] : {B name(X)}
    <- +!joining(X, Y) [achieve];

+!joining(X, Y) [achieve] : {B name(X), ~B join_agreement(X, Y)}
    <- +!speed_contr(0) [perform], +!steering_contr(0) [perform],
       .send(leader, :tell, join_req(X, Y)), *join_agreement(X, Y);

+!joining(X, Y) [achieve] : {B name(X), B join_agreement(X, Y), ~B changed_lane,
        ~G set_spacing(Z) [achieve]}
    <- +!speed_contr(0) [perform], +!steering_contr(0) [perform],
       perf(changing_lane(1)), *changed_lane;

+!joining(X, Y) [achieve] : {B name(X), B join_agreement(X, Y), B changed_lane,
        ~B speed_contr, ~B steering_contr, ~B closing_enough, ~G set_spacing(Z) [achieve]}
    <- +!speed_contr(1) [perform], *joining_distance;

+!joining(X, Y) [achieve] : {B name(X), B join_agreement(X, Y), B changed_lane,
        B speed_contr, ~B steering_contr, B closing_enough, ~G set_spacing(Z) [achieve]}
    <- +!steering_contr(1) [perform];

+!joining(X, Y) [achieve] : {B name(X), B join_agreement(X, Y), B changed_lane,
        ~B speed_contr, ~B steering_contr, B closing_enough, ~G set_spacing(Z) [achieve]}
    <- +!speed_contr(1) [perform], +!steering_contr(1) [perform];

+!joining(X, Y) [achieve] : {B name(X), B join_agreement(X, Y), B changed_lane,
        B speed_contr, B steering_contr, B closing_enough, ~B platoon_m,
        ~G set_spacing(Z) [achieve]}
    <- .send(leader, :tell, message(X, joined_succ)), *platoon_m, +platoon_ok;

+!speed_contr(Z) [perform] : {}
    <- perf(speed_contr(Z));

+!steering_contr(Z) [perform] : {}
    <- perf(steering_contr(Z));

# spacing commands arrive from the leader while in the platoon
+set_space_cmd(Z) : {B name(X), ~G leave_platoon [achieve]}
    <- -spacing_acked(%INC%), -spacing_acked(%NRM%), +!set_spacing(Z) [achieve];

+!set_spacing(Z) [achieve] : {B name(X), ~B spacing_acked(Z)}
    <- perf(set_space(Z)), *spacing_done(Z),
       .send(leader, :tell, spacing_ack(X, Z)), +spacing_acked(Z);

# leaving: driver intent, authorisation, spacing, manual switch, lane, ack
+leave_wish : {B name(X), B platoon_ok, ~G leave_platoon [achieve]}
    <- +!leave_platoon [achieve];

+!leave_platoon [achieve] : {B name(X), ~B leave_agr(X), ~G set_spacing(Z) [achieve]}
    <- .send(leader, :tell, leave_req(X)), *leave_agr(X);

+!leave_platoon [achieve] : {B name(X), B leave_agr(X), ~B spacing_done(%INC%)}
    <- perf(set_space(%INC%)), *spacing_done(%INC%);

+!leave_platoon [achieve] : {B name(X), B leave_agr(X), B spacing_done(%INC%), B speed_contr}
    <- +!speed_contr(0) [perform], +!steering_contr(0) [perform];

+!leave_platoon [achieve] : {B name(X), B leave_agr(X), B spacing_done(%INC%), ~B speed_contr,
        ~B steering_contr, ~B left_lane}
    <- perf(changing_lane(0)), *left_lane;

+!leave_platoon [achieve] : {B name(X), B leave_agr(X), B left_lane, ~B left_ok}
    <- .send(leader, :tell, message(X, left_succ)), +left_ok;
)";

// Slot tokens stand in for the remaining platoon capacity; relational
// beliefs rear/1 and behind/2 track the order. One request is served at a
// time (the serving token).
const char* kLeaderTemplate = R"(Name
leader

Initial Beliefs
normal_op

Plans
# join at the rear: agreement straight away
+join_req(X, Y) : {B normal_op, B rear(Y), B slot(S), ~B serving(W)}
    <- -slot(S), +serving(X),
       .send(X, :tell, join_agreement(X, Y)),
       *message(X, joined_succ),
       .send(X, :tell, platoon_m),
       +member(X), -rear(Y), +rear(X), +behind(Y, X),
       -serving(X);

# join behind a non-rear member: the vehicle currently holding that gap
# opens it first, and closes it once the newcomer confirmed
+join_req(X, Y) : {B normal_op, ~B rear(Y), B behind(Y, Z), B slot(S), ~B serving(W)}
    <- -slot(S), +serving(X),
       .send(Z, :tell, set_space_cmd(%INC%)), *spacing_ack(Z, %INC%),
       .send(X, :tell, join_agreement(X, Y)),
       *message(X, joined_succ),
       .send(Z, :tell, set_space_cmd(%NRM%)), *spacing_ack(Z, %NRM%),
       .send(X, :tell, platoon_m),
       +member(X), -behind(Y, Z), +behind(Y, X), +behind(X, Z),
       -serving(X);

# rear member leaves
+leave_req(X) : {B normal_op, B member(X), B rear(X), B behind(P, X), ~B serving(W)}
    <- +serving(X),
       .send(X, :tell, leave_agr(X)),
       *message(X, left_succ),
       -member(X), -rear(X), -behind(P, X), +rear(P), +slot(X),
       -serving(X);

# middle member leaves
+leave_req(X) : {B normal_op, B member(X), ~B rear(X), B behind(P, X), B behind(X, Q),
        ~B serving(W)}
    <- +serving(X),
       .send(X, :tell, leave_agr(X)),
       *message(X, left_succ),
       -member(X), -behind(P, X), -behind(X, Q), +behind(P, Q), +slot(X),
       -serving(X);
)";

std::string instantiate(const char* tpl, const SpacingConfig& cfg) {
    std::string s = tpl;
    s = replace_all(s, "%INC%", std::to_string(cfg.increase));
    s = replace_all(s, "%NRM%", std::to_string(cfg.normal));
    return s;
}

}  // namespace

std::string follower_source(const SpacingConfig& cfg) {
    return instantiate(kFollowerTemplate, cfg);
}

std::string leader_source(const SpacingConfig& cfg) { return instantiate(kLeaderTemplate, cfg); }

AgentProgram follower_program(const SpacingConfig& cfg) {
    return parse_program(follower_source(cfg));
}

AgentProgram leader_program(const SpacingConfig& cfg) {
    return parse_program(leader_source(cfg));
}

namespace {

struct MachineBuilder {
    EnvAutomaton m;
    explicit MachineBuilder(std::string name) { m.name = std::move(name); }

    int loc(const std::string& label) {
        m.locations.push_back(label);
        return static_cast<int>(m.locations.size()) - 1;
    }
    void consume_action(int src, int dst, const Term& pattern) {
        m.edges.push_back({src, dst, EnvEdge::Kind::ConsumeAction, pattern, false,
                           "consume " + pattern.str(), {}});
    }
    void consume_message(int src, int dst, const Term& pattern) {
        m.edges.push_back({src, dst, EnvEdge::Kind::ConsumeMessage, pattern, false,
                           "recv " + pattern.str(), {}});
    }
    void grant(int src, int dst, const Term& belief, const EnvProfile& profile,
               const std::vector<Term>& retracts = {}) {
        auto g = profile.grant_for(belief.functor());
        if (g == EnvProfile::Grant::Never) return;
        m.edges.push_back({src, dst, EnvEdge::Kind::Grant, belief,
                           g == EnvProfile::Grant::Must, "grant " + belief.str(), retracts});
    }
    void retract(int src, int dst, const Term& belief, const EnvProfile& profile) {
        auto g = profile.grant_for(belief.functor());
        m.edges.push_back({src, dst, EnvEdge::Kind::Retract, belief,
                           g == EnvProfile::Grant::Must, "retract " + belief.str(), {}});
    }

    // Self-loop consumption for every owned pattern a location cannot
    // otherwise consume (input enabledness).
    void absorb() {
        for (int l = 0; l < static_cast<int>(m.locations.size()); ++l) {
            for (const Term& p : m.action_alphabet)
                if (m.consuming_edges(l, p, false).empty()) consume_action(l, l, p);
            for (const Term& p : m.message_alphabet)
                if (m.consuming_edges(l, p, true).empty()) consume_message(l, l, p);
        }
    }
};

Term act(const std::string& text) { return Term::parse(text); }

EnvAutomaton lane_machine(const EnvProfile& profile, bool member_start) {
    MachineBuilder b("lane");
    int out = b.loc("out_of_lane");
    int in_pend = b.loc("entering_lane");
    int in_lane = b.loc("in_lane");
    int out_pend = b.loc("leaving_lane");
    b.m.action_alphabet = {act("perf(changing_lane(1))"), act("perf(changing_lane(0))")};
    b.consume_action(out, in_pend, act("perf(changing_lane(1))"));
    b.grant(in_pend, in_lane, Term::atom("changed_lane"), profile, {Term::atom("left_lane")});
    b.consume_action(in_lane, out_pend, act("perf(changing_lane(0))"));
    b.grant(out_pend, out, Term::atom("left_lane"), profile, {Term::atom("changed_lane")});
    b.absorb();
    b.m.initial = member_start ? in_lane : out;
    return b.m;
}

EnvAutomaton speed_machine(const EnvProfile& profile, bool member_start) {
    MachineBuilder b("speed");
    int off = b.loc("speed_off");
    int on_pend = b.loc("speed_enabling");
    int approaching = b.loc("approaching");
    int near = b.loc("near");
    int off_pend = b.loc("speed_disabling");
    b.m.action_alphabet = {act("perf(speed_contr(1))"), act("perf(speed_contr(0))")};
    b.consume_action(off, on_pend, act("perf(speed_contr(1))"));
    b.grant(on_pend, approaching, Term::atom("speed_contr"), profile);
    b.grant(approaching, near, Term::atom("joining_distance"), profile);
    for (int l : {on_pend, approaching, near})
        b.consume_action(l, off_pend, act("perf(speed_contr(0))"));
    b.retract(off_pend, off, Term::atom("speed_contr"), profile);
    b.absorb();
    b.m.initial = member_start ? near : off;
    return b.m;
}

EnvAutomaton steering_machine(const EnvProfile& profile, bool member_start) {
    MachineBuilder b("steering");
    int off = b.loc("steer_off");
    int on_pend = b.loc("steer_enabling");
    int on = b.loc("steer_on");
    int off_pend = b.loc("steer_disabling");
    b.m.action_alphabet = {act("perf(steering_contr(1))"), act("perf(steering_contr(0))")};
    b.consume_action(off, on_pend, act("perf(steering_contr(1))"));
    b.grant(on_pend, on, Term::atom("steering_contr"), profile);
    b.consume_action(on, off_pend, act("perf(steering_contr(0))"));
    b.retract(off_pend, off, Term::atom("steering_contr"), profile);
    b.absorb();
    b.m.initial = member_start ? on : off;
    return b.m;
}

EnvAutomaton spacing_machine(const EnvProfile& profile, const SpacingConfig& cfg) {
    MachineBuilder b("spacing");
    int idle = b.loc("gap_steady");
    int busy_inc = b.loc("gap_opening");
    int busy_nrm = b.loc("gap_closing");
    Term inc = Term::parse("perf(set_space(" + std::to_string(cfg.increase) + "))");
    Term nrm = Term::parse("perf(set_space(" + std::to_string(cfg.normal) + "))");
    Term done_inc = Term::parse("spacing_done(" + std::to_string(cfg.increase) + ")");
    Term done_nrm = Term::parse("spacing_done(" + std::to_string(cfg.normal) + ")");
    b.m.action_alphabet = {inc, nrm};
    b.consume_action(idle, busy_inc, inc);
    b.grant(busy_inc, idle, done_inc, profile, {done_nrm});
    b.consume_action(idle, busy_nrm, nrm);
    b.grant(busy_nrm, idle, done_nrm, profile, {done_inc});
    b.absorb();
    return b.m;
}

}  // namespace

EnvAutomaton vehicle_env(const EnvProfile& profile, const SpacingConfig& cfg, bool member_start) {
    return env_product("vehicle",
                       {lane_machine(profile, member_start), speed_machine(profile, member_start),
                        steering_machine(profile, member_start), spacing_machine(profile, cfg)});
}

EnvAutomaton comms_env(const EnvProfile& profile, const SpacingConfig& cfg, bool member_start) {
    MachineBuilder b("comms");
    int idle = b.loc("idle");
    int req = b.loc("join_requested");
    int agr = b.loc("join_agreed");
    int acked = b.loc("join_acked");
    int member = b.loc("member");
    int sp_inc = b.loc("spacing_increase_sent");
    int sp_mid = b.loc("spacing_increased");
    int sp_dec = b.loc("spacing_decrease_sent");
    int wished = b.loc("leave_wished");
    int lreq = b.loc("leave_requested");
    int lagr = b.loc("leave_agreed");
    int left = b.loc("left");

    std::string inc = std::to_string(cfg.increase);
    std::string nrm = std::to_string(cfg.normal);

    b.m.message_alphabet = {act("join_req(f3, f1)"),      act("message(f3, joined_succ)"),
                            act("spacing_ack(f3, " + inc + ")"),
                            act("spacing_ack(f3, " + nrm + ")"),
                            act("leave_req(f3)"),         act("message(f3, left_succ)")};

    // join choreography
    b.consume_message(idle, req, act("join_req(f3, f1)"));
    b.grant(req, agr, act("join_agreement(f3, f1)"), profile);
    b.consume_message(agr, acked, act("message(f3, joined_succ)"));
    b.grant(acked, member, Term::atom("platoon_m"), profile);

    // member phase: spacing services, one at a time
    b.grant(member, sp_inc, act("set_space_cmd(" + inc + ")"), profile);
    b.consume_message(sp_inc, sp_mid, act("spacing_ack(f3, " + inc + ")"));
    b.grant(sp_mid, sp_dec, act("set_space_cmd(" + nrm + ")"), profile);
    b.consume_message(sp_dec, member, act("spacing_ack(f3, " + nrm + ")"));

    // leaving: by driver wish or by the agent's own request
    b.grant(member, wished, Term::atom("leave_wish"), profile);
    b.consume_message(wished, lreq, act("leave_req(f3)"));
    b.consume_message(member, lreq, act("leave_req(f3)"));
    b.grant(lreq, lagr, act("leave_agr(f3)"), profile);
    b.consume_message(lagr, left, act("message(f3, left_succ)"));

    b.absorb();
    b.m.initial = member_start ? member : idle;
    b.m.validate();
    return b.m;
}

std::vector<EnvAutomaton> CheckScenario::make_envs() const {
    return {vehicle_env(profile, spacing, member_start),
            comms_env(profile, spacing, member_start)};
}

CheckScenario scenario_join(const EnvProfile& profile, const std::string& name) {
    CheckScenario s;
    s.name = name;
    s.program = follower_program();
    s.profile = profile;
    // spacing services make sense for members only; keep the join state
    // space focused unless the profile explicitly enables them
    if (!s.profile.grants.count("set_space_cmd"))
        s.profile.never("set_space_cmd");
    if (!s.profile.grants.count("leave_wish")) s.profile.never("leave_wish");
    return s;
}

std::vector<AgentPropertyCase> shipped_agent_suite() {
    std::vector<AgentPropertyCase> out;
    auto add = [&](const std::string& name, const std::string& text, CheckScenario scenario) {
        AgentPropertyCase c;
        c.name = name;
        c.formula_text = text;
        c.formula = parse_formula(text);
        c.scenario = std::move(scenario);
        out.push_back(std::move(c));
    };

    add("join_unless_agreement",
        "[] (G(f3, platoon_m(f3, f1)) -> (~D(f3, perf(changing_lane(1))) W B(f3, "
        "join_agreement(f3, f1))))",
        scenario_join(EnvProfile::may_all(), "join_may_all"));

    add("join_never_agreement",
        "([] (G(f3, platoon_m(f3, f1)) & ~B(f3, join_agreement(f3, f1)))) -> ([] ~D(f3, "
        "perf(changing_lane(1))))",
        scenario_join(EnvProfile::may_all().never("join_agreement"), "join_never_agreement"));

    add("join_liveness",
        "(G(f3, platoon_m(f3, f1)) & ~B(f3, changed_lane) & <> B(f3, join_agreement(f3, f1))) "
        "-> <> D(f3, perf(changing_lane(1)))",
        scenario_join(EnvProfile::must_all()
                          .set("set_space_cmd", EnvProfile::Grant::Never)
                          .set("leave_wish", EnvProfile::Grant::Never),
                      "join_must_all"));

    add("speed_before_lane",
        "([] (G(f3, platoon_m(f3, f1)) & ~B(f3, changed_lane))) -> ([] ~D(f3, "
        "perf(speed_contr(1))))",
        scenario_join(EnvProfile::may_all().never("changed_lane"), "join_never_lane"));

    add("speed_before_agreement",
        "([] (G(f3, platoon_m(f3, f1)) & ~B(f3, join_agreement(f3, f1)))) -> ([] ~D(f3, "
        "perf(speed_contr(1))))",
        scenario_join(EnvProfile::may_all().never("join_agreement"), "join_never_agreement"));

    add("steering_before_distance",
        "([] (G(f3, platoon_m(f3, f1)) & ~B(f3, joining_distance))) -> ([] ~D(f3, "
        "perf(steering_contr(1))))",
        scenario_join(EnvProfile::may_all().never("joining_distance"), "join_never_distance"));

    add("leave_never_agreement",
        "([] (G(f3, leave_platoon) & ~B(f3, leave_agr(f3)))) -> ([] ~D(f3, "
        "perf(speed_contr(0))))",
        scenario_leave(EnvProfile::may_all().never("leave_agr"), "leave_never_agreement"));

    return out;
}

CheckScenario scenario_leave(const EnvProfile& profile, const std::string& name) {
    CheckScenario s;
    s.name = name;
    s.program = follower_program();
    s.profile = profile;
    s.member_start = true;
    s.replace_goals = true;
    s.goal_overrides = {{Term::atom("leave_platoon"), GoalKind::Achieve}};
    for (const char* belief :
         {"join_agreement(f3, f1)", "changed_lane", "speed_contr", "steering_contr",
          "joining_distance", "platoon_m", "platoon_ok"})
        s.extra_beliefs.push_back(Term::parse(belief));
    if (!s.profile.grants.count("set_space_cmd")) s.profile.never("set_space_cmd");
    if (!s.profile.grants.count("leave_wish")) s.profile.never("leave_wish");
    return s;
}

}  // namespace plv
