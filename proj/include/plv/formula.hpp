#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "plv/diagnostics.hpp"
#include "plv/term.hpp"

namespace plv {

enum class AtomMod { Belief, Goal, Does, IntendsToDo };

std::string to_string(AtomMod m);

// Modal atom over one agent: B(ag, t), G(ag, t), D(ag, t) or ItD(ag, t).
struct ModalAtom {
    AtomMod mod = AtomMod::Belief;
    std::string agent;
    Term term;

    std::string str() const;
    bool operator==(const ModalAtom&) const = default;
    bool operator<(const ModalAtom& o) const;
};

// Linear-temporal formula over modal atoms. Immutable shared tree. Until and
// Release do not appear in the surface syntax; they are produced by the
// negation-normal-form rewrite used by the automaton translation.
class Formula {
public:
    enum class Kind {
        True,
        False,
        Atom,
        Not,
        And,
        Or,
        Implies,
        Always,
        Eventually,
        WeakUntil,
        Until,
        Release
    };

    Formula() : Formula(tt()) {}

    static Formula tt();
    static Formula ff();
    static Formula atom(ModalAtom a);
    static Formula negation(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula always(Formula f);
    static Formula eventually(Formula f);
    static Formula weak_until(Formula a, Formula b);
    static Formula until(Formula a, Formula b);
    static Formula release(Formula a, Formula b);

    Kind kind() const;
    const ModalAtom& modal_atom() const;
    Formula lhs() const;  // also the operand of unary nodes
    Formula rhs() const;

    size_t node_count() const;
    std::string str() const;

    bool operator==(const Formula& o) const;

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Rewrites ->, W, [] and <> away and pushes negation to the atoms, yielding a
// formula over {true, false, (negated) atoms, And, Or, Until, Release}.
Formula to_nnf(const Formula& f);

// Distinct atoms of f in a stable order.
std::vector<ModalAtom> collect_atoms(const Formula& f);

// Names of the agents referenced by the formula's atoms.
std::vector<std::string> agents_of(const Formula& f);

// ASCII property syntax: atoms `B(ag, term)`, `G(..)`, `D(..)`, `ItD(..)`,
// constants `true`/`false`, connectives `~ & | ->`, temporal `[] <> W`.
// Precedence, weakest first: ->, |, &, W, unary. The grammar is documented in
// docs/property-language.md.
Formula parse_formula(const std::string& text);

// Parses a property file: one formula per line, '#' comments, blank lines
// ignored. Returns (name, formula) pairs; names are `<stem>:<index>` unless a
// leading `name = formula` binding is present on the line.
std::vector<std::pair<std::string, Formula>> parse_property_file(const std::string& text,
                                                                 const std::string& stem);

}  // namespace plv
