#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plv/platoon_timed.hpp"
#include "plv/timed_check.hpp"
#include "plv/timed_text.hpp"

using namespace plv;

TEST_CASE("derived bounds from the default duration table") {
    PlatoonNetConfig cfg;
    CHECK(cfg.ack_timeout() == 55);  // sum of the three upper bounds
    CHECK(cfg.join_total_lo() == 50);
    CHECK(cfg.join_total_hi() == 90);
    CHECK(cfg.leave_total_lo() == 30);
    CHECK(cfg.leave_total_hi() == 50);
}

TEST_CASE("vehicle automaton: windows and the lane-failure branch") {
    PlatoonNetConfig cfg;
    TimedAutomaton v = build_vehicle(2, cfg);
    CHECK(v.loc_index("lane_busy") >= 0);
    bool fail_branch = false;
    for (const TimedEdge& e : v.edges)
        if (e.action == "lane_fail") {
            fail_branch = true;
            CHECK(e.channel == -1);
            REQUIRE(e.guard.size() == 1);
            CHECK(e.guard[0].bound == cfg.durations.change_lane_hi + 1);
        }
    CHECK(fail_branch);

    cfg.lane_can_fail = false;
    TimedAutomaton v2 = build_vehicle(2, cfg);
    for (const TimedEdge& e : v2.edges) CHECK(e.action != "lane_fail");
}

TEST_CASE("agent automaton: one idle hub, property locations, region gating") {
    PlatoonNetConfig cfg;
    AgentOptions opts;
    opts.can_join = true;
    opts.can_leave = true;
    TimedAutomaton a = build_agent(2, cfg, opts);
    for (const char* loc : {"idle", "wait_j_agr", "rdy_ch_lane", "join_completed",
                            "leave_completed", "wait_l_agr"})
        CHECK(a.loc_index(loc) >= 0);
    CHECK(a.var_index("incr_spacing") >= 0);
    CHECK(a.var_index("spacing_done") >= 0);
    CHECK(a.clock_index("process_time") >= 0);

    int member = a.var_index("member");
    REQUIRE(member >= 0);
    // join entry requires member == 0, leave entry member == 1
    for (const TimedEdge& e : a.edges) {
        if (e.src != a.loc_index("idle")) continue;
        if (e.dst == a.loc_index("wait_j_agr")) {
            REQUIRE(e.guard.size() == 1);
            CHECK(!e.guard[0].is_clock);
            CHECK(e.guard[0].bound == 0);
        }
        if (e.dst == a.loc_index("wait_l_agr")) {
            REQUIRE(e.guard.size() == 1);
            CHECK(e.guard[0].bound == 1);
        }
    }
    // the idle hub has no outgoing internal edge
    for (const TimedEdge& e : a.edges)
        if (e.src == a.loc_index("idle")) CHECK(e.channel >= 0);
}

TEST_CASE("leader: timeout branch closes the gap before returning to idle") {
    PlatoonNetConfig cfg;
    TimedAutomaton l = build_leader(cfg);
    int timeout_edges = 0;
    for (const TimedEdge& e : l.edges) {
        if (e.action != "ack timeout") continue;
        ++timeout_edges;
        REQUIRE(e.guard.size() == 1);
        CHECK(e.guard[0].bound == cfg.ack_timeout());
        // its target must lead through a decrease + ack before idle
        int t = e.dst;
        bool decr = false;
        for (const TimedEdge& e2 : l.edges)
            if (e2.src == t && e2.send) decr = true;
        CHECK(decr);
    }
    CHECK(timeout_edges > 0);
}

TEST_CASE("shipped net validates and serializes") {
    TimedNet net = build_platoon_net({});
    CHECK(net.automata.size() == 7);  // leader + 3 agents + 3 vehicles
    std::string text = serialize_net(net);
    TimedNet back = parse_net(text);
    CHECK(serialize_net(back) == text);
}

TEST_CASE("property suite: five properties of the published forms") {
    auto suite = platoon_property_suite({});
    REQUIRE(suite.size() == 5);
    CHECK(suite[0].kind == TimedProperty::Kind::Invariant);
    CHECK(suite[1].kind == TimedProperty::Kind::LeadsTo);
    CHECK(suite[2].kind == TimedProperty::Kind::Invariant);
    CHECK(suite[3].kind == TimedProperty::Kind::Invariant);
    CHECK(suite[4].kind == TimedProperty::Kind::Invariant);
    CHECK(suite[3].str().find("50") != std::string::npos);
    CHECK(suite[3].str().find("90") != std::string::npos);
    CHECK(suite[4].str().find("30") != std::string::npos);
    CHECK(suite[4].str().find("50") != std::string::npos);
}
