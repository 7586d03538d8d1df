#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "plv/term.hpp"

using namespace plv;

TEST_CASE("term construction and printing") {
    Term t = Term::compound("join_req", {Term::var("X"), Term::atom("f1")});
    CHECK(t.str() == "join_req(X, f1)");
    CHECK(!t.ground());
    CHECK(Term::parse("join_req(X, f1)") == t);
    CHECK(Term::parse("17").value() == 17);
    CHECK(Term::compound("a", {}).is_atom());
}

TEST_CASE("structural order is total on a small universe") {
    std::set<Term> terms{Term::atom("a"), Term::atom("b"), Term::number(1), Term::var("X"),
                         Term::compound("f", {Term::atom("a")})};
    CHECK(terms.size() == 5);
}

TEST_CASE("unify: forced mgu") {
    Term a = Term::parse("join_agr(X, f1)");
    Term b = Term::parse("join_agr(f3, f1)");
    auto s = unify(a, b);
    REQUIRE(s.has_value());
    CHECK(s->apply(Term::var("X")) == Term::atom("f3"));
    CHECK(s->size() == 1);
}

TEST_CASE("unify: identity gives the empty substitution") {
    auto s = unify(Term::atom("a"), Term::atom("a"));
    REQUIRE(s.has_value());
    CHECK(s->empty());
}

TEST_CASE("unify: occurs check rejects f(X) = X") {
    Term fx = Term::compound("f", {Term::var("X")});
    CHECK(!unify(fx, Term::var("X")).has_value());
}

TEST_CASE("apply replaces all domain variables") {
    Subst s;
    REQUIRE(s.bind("X", Term::atom("f3")));
    Term t = Term::parse("join_req(X, Y)");
    CHECK(s.apply(t) == Term::parse("join_req(f3, Y)"));
    CHECK(Subst{}.apply(t) == t);
}

TEST_CASE("binding chains resolve to idempotent form") {
    // X -> g(Y) then Y -> a resolves the earlier binding.
    Subst s;
    REQUIRE(s.bind("X", Term::parse("g(Y)")));
    REQUIRE(s.bind("Y", Term::atom("a")));
    Term t = Term::compound("f", {Term::var("X")});
    Term once = s.apply(t);
    CHECK(once == Term::parse("f(g(a))"));
    CHECK(s.apply(once) == once);
}

namespace {

// Enumerated term universe: depth <= 3, functors f/1, g/2, atoms a, b,
// variables X, Y. Used for the mgu soundness/generality properties.
std::vector<Term> universe() {
    std::vector<Term> depth0{Term::atom("a"), Term::atom("b"), Term::var("X"), Term::var("Y")};
    std::vector<Term> all = depth0;
    std::vector<Term> prev = depth0;
    for (int d = 0; d < 2; ++d) {
        std::vector<Term> next;
        for (const Term& t : prev) {
            next.push_back(Term::compound("f", {t}));
            for (const Term& u : depth0) next.push_back(Term::compound("g", {t, u}));
        }
        all.insert(all.end(), next.begin(), next.end());
        prev = std::move(next);
    }
    return all;
}

std::vector<Subst> enumerate_ground_substs(const std::vector<std::string>& vars) {
    std::vector<Term> range{Term::atom("a"), Term::atom("b"),
                            Term::compound("f", {Term::atom("a")})};
    std::vector<Subst> out{Subst{}};
    for (const std::string& v : vars) {
        std::vector<Subst> next;
        for (const Subst& s : out) {
            for (const Term& t : range) {
                Subst s2 = s;
                REQUIRE(s2.bind(v, t));
                next.push_back(s2);
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("mgu soundness and generality over the enumerated universe") {
    auto terms = universe();
    int unified = 0;
    for (const Term& t1 : terms) {
        for (const Term& t2 : terms) {
            auto mgu = unify(t1, t2);
            if (!mgu) continue;
            ++unified;
            CHECK(mgu->apply(t1) == mgu->apply(t2));

            // Any ground unifier sigma factors through the mgu:
            // sigma(t) == sigma(mgu(t)).
            std::vector<std::string> vars = t1.vars();
            for (const std::string& v : t2.vars())
                if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
            if (vars.empty()) continue;
            for (const Subst& sigma : enumerate_ground_substs(vars)) {
                if (sigma.apply(t1) != sigma.apply(t2)) continue;
                CHECK(sigma.apply(t1) == sigma.apply(mgu->apply(t1)));
                CHECK(sigma.apply(t2) == sigma.apply(mgu->apply(t2)));
            }
        }
    }
    CHECK(unified > 100);
}
