#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plv/buchi.hpp"
#include "support/oracles.hpp"

using namespace plv;
using plvtest::check_lasso_agreement;

TEST_CASE("always p yields a one-state self-loop accepting iff p holds forever") {
    BuchiAutomaton a = ltl_to_buchi(parse_formula("[] B(x, p)"));
    plvtest::BuchiMatcher m(a, collect_atoms(parse_formula("[] B(x, p)")));
    // p p p ... accepted; p ~p p~p... rejected
    CHECK(m.accepts({1}, 0));
    CHECK(!m.accepts({1, 0}, 0));
    CHECK(!m.accepts({0}, 0));
}

TEST_CASE("eventually p accepts iff p occurs") {
    Formula f = parse_formula("<> B(x, p)");
    BuchiAutomaton a = ltl_to_buchi(f);
    plvtest::BuchiMatcher m(a, collect_atoms(f));
    CHECK(m.accepts({0, 0, 1, 0}, 3));   // p in the prefix
    CHECK(m.accepts({0, 1}, 0));         // p in the cycle
    CHECK(!m.accepts({0}, 0));
    CHECK(!m.accepts({0, 0, 0}, 1));
}

TEST_CASE("node bound raises BoundError") {
    Formula f = parse_formula(
        "(B(a,p1) W B(a,q1)) & (B(a,p2) W B(a,q2)) & (B(a,p3) W B(a,q3)) & (B(a,p4) W B(a,q4))");
    CHECK_THROWS_AS(ltl_to_buchi(f, 8), BoundError);
}

TEST_CASE("tableau agrees with the lasso oracle on small formulas") {
    const char* texts[] = {
        "B(x, p)",
        "~B(x, p)",
        "[] B(x, p)",
        "<> B(x, p)",
        "B(x, p) W B(x, q)",
        "[] (B(x, p) -> <> B(x, q))",
        "<> [] B(x, p)",
        "[] <> B(x, p)",
        "(B(x, p) W B(x, q)) & [] ~B(x, r)",
        "[] (B(x, p) -> (~B(x, r) W B(x, q)))",
    };
    for (const char* t : texts) {
        auto res = check_lasso_agreement(parse_formula(t), 5);
        INFO(t);
        CHECK(res.mismatches == 0);
        CHECK(res.lassos > 0);
    }
}
