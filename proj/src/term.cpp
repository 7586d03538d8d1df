#include "plv/term.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace plv {

Term Term::atom(std::string name) {
    Term t;
    t.kind_ = TermKind::Atom;
    t.text_ = std::move(name);
    return t;
}

Term Term::number(long value) {
    Term t;
    t.kind_ = TermKind::Int;
    t.text_.clear();
    t.value_ = value;
    return t;
}

Term Term::var(std::string name) {
    Term t;
    t.kind_ = TermKind::Var;
    t.text_ = std::move(name);
    return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    if (args.empty()) return atom(std::move(functor));
    Term t;
    t.kind_ = TermKind::Compound;
    t.text_ = std::move(functor);
    t.args_ = std::move(args);
    return t;
}

std::string Term::functor() const {
    if (kind_ == TermKind::Atom || kind_ == TermKind::Compound) return text_;
    return "";
}

bool Term::ground() const {
    if (kind_ == TermKind::Var) return false;
    for (const Term& a : args_)
        if (!a.ground()) return false;
    return true;
}

void Term::collect_vars(std::vector<std::string>& out) const {
    if (kind_ == TermKind::Var) {
        if (std::find(out.begin(), out.end(), text_) == out.end()) out.push_back(text_);
        return;
    }
    for (const Term& a : args_) a.collect_vars(out);
}

std::vector<std::string> Term::vars() const {
    std::vector<std::string> out;
    collect_vars(out);
    return out;
}

std::string Term::str() const {
    switch (kind_) {
        case TermKind::Atom:
        case TermKind::Var:
            return text_;
        case TermKind::Int:
            return std::to_string(value_);
        case TermKind::Compound: {
            std::string s = text_;
            s += '(';
            for (size_t i = 0; i < args_.size(); ++i) {
                if (i) s += ", ";
                s += args_[i].str();
            }
            s += ')';
            return s;
        }
    }
    return "";
}

bool Term::operator==(const Term& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
        case TermKind::Int:
            return value_ == o.value_;
        case TermKind::Atom:
        case TermKind::Var:
            return text_ == o.text_;
        case TermKind::Compound:
            return text_ == o.text_ && args_ == o.args_;
    }
    return false;
}

bool Term::operator<(const Term& o) const {
    if (kind_ != o.kind_) return static_cast<int>(kind_) < static_cast<int>(o.kind_);
    switch (kind_) {
        case TermKind::Int:
            return value_ < o.value_;
        case TermKind::Atom:
        case TermKind::Var:
            return text_ < o.text_;
        case TermKind::Compound:
            if (text_ != o.text_) return text_ < o.text_;
            return args_ < o.args_;
    }
    return false;
}

size_t Term::hash() const {
    size_t h = 1469598103934665603ull;
    auto mix = [&h](size_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(static_cast<size_t>(kind_));
    if (kind_ == TermKind::Int) {
        mix(static_cast<size_t>(value_));
    } else {
        for (char c : text_) mix(static_cast<unsigned char>(c));
    }
    for (const Term& a : args_) mix(a.hash());
    return h;
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << t.str(); }

namespace {

struct MiniParser {
    const std::string& s;
    size_t i = 0;

    explicit MiniParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw std::runtime_error("bad term '" + s + "': " + what + " at offset " +
                                 std::to_string(i));
    }

    Term parse_term() {
        skip_ws();
        if (i >= s.size()) fail("unexpected end");
        char c = s[i];
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i;
            if (c == '-') ++i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i == start + (c == '-' ? 1u : 0u)) fail("expected digits");
            return Term::number(std::stol(s.substr(start, i - start)));
        }
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail("expected identifier");
        size_t start = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        std::string name = s.substr(start, i - start);
        bool is_var = std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '_';
        skip_ws();
        if (i < s.size() && s[i] == '(') {
            if (is_var) fail("variable cannot have arguments");
            ++i;
            std::vector<Term> args;
            skip_ws();
            if (i < s.size() && s[i] == ')') {
                ++i;
                return Term::atom(name);
            }
            while (true) {
                args.push_back(parse_term());
                skip_ws();
                if (i < s.size() && s[i] == ',') {
                    ++i;
                    continue;
                }
                if (i < s.size() && s[i] == ')') {
                    ++i;
                    break;
                }
                fail("expected ',' or ')'");
            }
            return Term::compound(name, std::move(args));
        }
        return is_var ? Term::var(name) : Term::atom(name);
    }
};

}  // namespace

Term Term::parse(const std::string& text) {
    MiniParser p(text);
    Term t = p.parse_term();
    p.skip_ws();
    if (p.i != text.size()) p.fail("trailing input");
    return t;
}

std::optional<Term> Subst::lookup(const std::string& var) const {
    auto it = map_.find(var);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

namespace {
bool occurs_in(const std::string& var, const Term& t) {
    if (t.is_var()) return t.text() == var;
    for (const Term& a : t.args())
        if (occurs_in(var, a)) return true;
    return false;
}

Term replace_var(const Term& t, const std::string& var, const Term& value) {
    if (t.is_var()) return t.text() == var ? value : t;
    if (!t.is_compound()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(replace_var(a, var, value));
    return Term::compound(t.text(), std::move(args));
}
}  // namespace

bool Subst::bind(const std::string& var, const Term& t) {
    Term resolved = apply(t);
    if (resolved.is_var() && resolved.text() == var) return true;
    if (occurs_in(var, resolved)) return false;
    for (auto& [v, bound] : map_) bound = replace_var(bound, var, resolved);
    map_[var] = std::move(resolved);
    return true;
}

bool Subst::merge(const Subst& other) {
    for (const auto& [v, t] : other.map_) {
        auto existing = lookup(v);
        Term resolved = apply(t);
        if (existing) {
            if (*existing != resolved) return false;
            continue;
        }
        if (!bind(v, resolved)) return false;
    }
    return true;
}

Term Subst::apply(const Term& t) const {
    if (t.is_var()) {
        auto it = map_.find(t.text());
        return it == map_.end() ? t : it->second;
    }
    if (!t.is_compound()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(apply(a));
    return Term::compound(t.text(), std::move(args));
}

std::string Subst::str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [v, t] : map_) {
        if (!first) s += ", ";
        first = false;
        s += v + " -> " + t.str();
    }
    s += "}";
    return s;
}

std::optional<Subst> unify(const Term& a, const Term& b, Subst seed) {
    std::vector<std::pair<Term, Term>> work{{a, b}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        Term u = seed.apply(x);
        Term v = seed.apply(y);
        if (u == v) continue;
        if (u.is_var()) {
            if (!seed.bind(u.text(), v)) return std::nullopt;
            continue;
        }
        if (v.is_var()) {
            if (!seed.bind(v.text(), u)) return std::nullopt;
            continue;
        }
        if (u.kind() != v.kind()) return std::nullopt;
        if (u.is_int()) return std::nullopt;  // unequal numerals (equality handled above)
        if (u.text() != v.text() || u.arity() != v.arity()) return std::nullopt;
        for (size_t i = 0; i < u.arity(); ++i) work.emplace_back(u.args()[i], v.args()[i]);
    }
    return seed;
}

std::optional<Subst> unify(const Term& a, const Term& b) { return unify(a, b, Subst{}); }

}  // namespace plv
