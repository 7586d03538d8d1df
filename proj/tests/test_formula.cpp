#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plv/formula.hpp"

using namespace plv;

TEST_CASE("box over implication and unless parse as documented") {
    Formula f = parse_formula(
        "[] (G(f3, platoon_m(f3, f1)) & ~B(f3, join_agreement(f3, f1)) ->"
        " [] ~D(f3, perf(changing_lane(1))))");
    CHECK(f.kind() == Formula::Kind::Always);
    CHECK(f.lhs().kind() == Formula::Kind::Implies);

    Formula g = parse_formula("[] (G(a, g) -> (~D(a, x) W B(a, b)))");
    CHECK(g.lhs().rhs().kind() == Formula::Kind::WeakUntil);
}

TEST_CASE("box p parses for atomic p") {
    Formula f = parse_formula("[] B(a, p)");
    CHECK(f.kind() == Formula::Kind::Always);
    CHECK(f.lhs().kind() == Formula::Kind::Atom);
    CHECK(f.lhs().modal_atom().mod == AtomMod::Belief);
}

TEST_CASE("implication is weakest: [] a -> b groups as ([] a) -> b") {
    Formula f = parse_formula("[] B(x, a) -> B(x, b)");
    CHECK(f.kind() == Formula::Kind::Implies);
    CHECK(f.lhs().kind() == Formula::Kind::Always);
}

TEST_CASE("printer round-trips") {
    const char* texts[] = {
        "([] (G(f3, platoon_m(f3, f1)) & ~B(f3, join_agreement(f3, f1)))) -> ([] ~D(f3, "
        "perf(changing_lane(1))))",
        "(G(f3, platoon_m(f3, f1)) & ~B(f3, changed_lane) & <> B(f3, join_agreement(f3, f1))) -> "
        "<> D(f3, perf(changing_lane(1)))",
        "[] (G(a, g) -> (~D(a, x) W B(a, b)))",
        "true",
        "B(a, p) | ~B(a, q) & ItD(a, send(leader, tell, m))",
    };
    for (const char* t : texts) {
        Formula f = parse_formula(t);
        Formula g = parse_formula(f.str());
        CHECK(f == g);
        CHECK(f.str() == g.str());
    }
}

TEST_CASE("nnf removes surface operators") {
    Formula f = parse_formula("[] (B(a, p) -> <> (B(a, q) W B(a, r)))");
    Formula n = to_nnf(f);
    std::vector<Formula> stack{n};
    while (!stack.empty()) {
        Formula cur = stack.back();
        stack.pop_back();
        auto k = cur.kind();
        CHECK(k != Formula::Kind::Implies);
        CHECK(k != Formula::Kind::Always);
        CHECK(k != Formula::Kind::Eventually);
        CHECK(k != Formula::Kind::WeakUntil);
        if (k == Formula::Kind::Not) {
            CHECK(cur.lhs().kind() == Formula::Kind::Atom);
            continue;
        }
        if (k == Formula::Kind::And || k == Formula::Kind::Or || k == Formula::Kind::Until ||
            k == Formula::Kind::Release) {
            stack.push_back(cur.lhs());
            stack.push_back(cur.rhs());
        }
    }
}

TEST_CASE("atom collection and agent extraction") {
    Formula f = parse_formula("B(f3, x) & G(f3, y) | D(f1, z)");
    CHECK(collect_atoms(f).size() == 3);
    auto agents = agents_of(f);
    CHECK(agents.size() == 2);
}

TEST_CASE("property file parsing with comments and names") {
    auto props = parse_property_file(
        "# a comment\n"
        "no_lane = [] ~D(f3, perf(changing_lane(1)))\n"
        "\n"
        "B(f3, ok) -> <> G(f3, done)  # trailing comment\n",
        "suite");
    REQUIRE(props.size() == 2);
    CHECK(props[0].first == "no_lane");
    CHECK(props[1].first == "suite:1");
}

TEST_CASE("parse errors carry position") {
    CHECK_THROWS_AS(parse_formula("[] (B(f3, x) &"), ParseError);
    CHECK_THROWS_AS(parse_formula("Q(f3, x)"), ParseError);
}
