#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plv/checker.hpp"
#include "plv/platoon.hpp"
#include "plv/platoon_timed.hpp"
#include "plv/timed_check.hpp"

using namespace plv;

// The parallel frontier kernels must agree with the serial reference
// implementations state for state, and verdicts must be independent of the
// worker count.

TEST_CASE("timed kernels: serial reference equals parallel frontier search") {
    PlatoonNetConfig cfg;
    TimedNet net = build_platoon_net(cfg);
    auto suite = platoon_property_suite(cfg);
    std::vector<std::vector<int>> extra;
    suite[3].lhs.collect_clock_consts(net, extra);
    NetSemantics sem(net, 1, extra);
    TimedGraph serial = timed_explore_serial(sem, 10'000'000);
    TimedGraph par = timed_explore(sem, 10'000'000, 4);
    CHECK(serial.size() == par.size());
}

TEST_CASE("agent kernels: serial reference equals parallel frontier search") {
    CheckScenario s = scenario_join(EnvProfile::may_all().never("join_agreement"), "par");
    ComposedSystem sys = compose(s.program, s.make_envs());
    SystemGraph serial = explore_serial(sys, 1'000'000);
    SystemGraph par = explore(sys, 1'000'000, 4);
    REQUIRE(serial.size() == par.size());
}

TEST_CASE("verdicts identical across worker counts") {
    PlatoonNetConfig cfg;
    TimedNet net = build_platoon_net(cfg);
    auto suite = platoon_property_suite(cfg);
    TimedCheckOptions w1, w4;
    w1.workers = 1;
    w4.workers = 4;
    TimedVerdict a = check_property(net, suite[0], w1);
    TimedVerdict b = check_property(net, suite[0], w4);
    CHECK(a.holds == b.holds);
    CHECK(a.states == b.states);
}
