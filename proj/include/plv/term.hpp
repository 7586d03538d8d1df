#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace plv {

enum class TermKind { Atom, Int, Var, Compound };

// First-order terms: atoms, integer numerals, variables (names starting with
// an uppercase letter or '_') and compound terms with a fixed functor/arity.
// Immutable value type.
class Term {
public:
    Term() : kind_(TermKind::Atom), text_("nil") {}

    static Term atom(std::string name);
    static Term number(long value);
    static Term var(std::string name);
    static Term compound(std::string functor, std::vector<Term> args);

    // Parses "name", "42", "X" or "f(a, X, 1)". Throws std::runtime_error on
    // malformed input; used by config files and tests.
    static Term parse(const std::string& text);

    TermKind kind() const { return kind_; }
    bool is_atom() const { return kind_ == TermKind::Atom; }
    bool is_int() const { return kind_ == TermKind::Int; }
    bool is_var() const { return kind_ == TermKind::Var; }
    bool is_compound() const { return kind_ == TermKind::Compound; }

    // Atom/variable name or compound functor.
    const std::string& text() const { return text_; }
    long value() const { return value_; }
    const std::vector<Term>& args() const { return args_; }
    size_t arity() const { return args_.size(); }

    // Functor name for atoms and compounds ("" otherwise).
    std::string functor() const;

    bool ground() const;
    void collect_vars(std::vector<std::string>& out) const;
    std::vector<std::string> vars() const;

    std::string str() const;

    bool operator==(const Term& o) const;
    bool operator!=(const Term& o) const { return !(*this == o); }
    bool operator<(const Term& o) const;
    size_t hash() const;

private:
    TermKind kind_;
    std::string text_;
    long value_ = 0;
    std::vector<Term> args_;
};

std::ostream& operator<<(std::ostream& os, const Term& t);

struct TermHash {
    size_t operator()(const Term& t) const { return t.hash(); }
};

// Finite map variable -> term, kept idempotent: no variable in the domain
// occurs in any bound term.
class Subst {
public:
    bool empty() const { return map_.empty(); }
    size_t size() const { return map_.size(); }
    const std::map<std::string, Term>& bindings() const { return map_; }

    std::optional<Term> lookup(const std::string& var) const;

    // Binds var := t after resolving t against the current bindings.
    // Returns false (leaving the substitution unchanged) when the occurs
    // check fails.
    bool bind(const std::string& var, const Term& t);

    // Adds every binding of other on top of this one; fails on occurs-check
    // violation or on conflicting bindings for the same variable.
    bool merge(const Subst& other);

    Term apply(const Term& t) const;

    std::string str() const;
    bool operator==(const Subst& o) const { return map_ == o.map_; }

private:
    std::map<std::string, Term> map_;
};

// Most general unifier with occurs check. Failure is an empty optional, not
// an error.
std::optional<Subst> unify(const Term& a, const Term& b);
std::optional<Subst> unify(const Term& a, const Term& b, Subst seed);

}  // namespace plv
