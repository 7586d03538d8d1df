#include "plv/formula.hpp"

#include <algorithm>
#include <sstream>

#include "lexer.hpp"
#include "term_tokens.hpp"

namespace plv {

std::string to_string(AtomMod m) {
    switch (m) {
        case AtomMod::Belief: return "B";
        case AtomMod::Goal: return "G";
        case AtomMod::Does: return "D";
        case AtomMod::IntendsToDo: return "ItD";
    }
    return "?";
}

std::string ModalAtom::str() const {
    return to_string(mod) + "(" + agent + ", " + term.str() + ")";
}

bool ModalAtom::operator<(const ModalAtom& o) const {
    if (mod != o.mod) return static_cast<int>(mod) < static_cast<int>(o.mod);
    if (agent != o.agent) return agent < o.agent;
    return term < o.term;
}

struct Formula::Node {
    Kind kind;
    ModalAtom atom;
    std::shared_ptr<const Node> lhs, rhs;
};

Formula Formula::tt() {
    static auto n = std::make_shared<const Node>(Node{Kind::True, {}, nullptr, nullptr});
    return Formula(n);
}

Formula Formula::ff() {
    static auto n = std::make_shared<const Node>(Node{Kind::False, {}, nullptr, nullptr});
    return Formula(n);
}

Formula Formula::atom(ModalAtom a) {
    return Formula(std::make_shared<const Node>(Node{Kind::Atom, std::move(a), nullptr, nullptr}));
}

Formula Formula::negation(Formula f) {
    return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, f.node_, nullptr}));
}
Formula Formula::conj(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::And, {}, a.node_, b.node_}));
}
Formula Formula::disj(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, a.node_, b.node_}));
}
Formula Formula::implies(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::Implies, {}, a.node_, b.node_}));
}
Formula Formula::always(Formula f) {
    return Formula(std::make_shared<const Node>(Node{Kind::Always, {}, f.node_, nullptr}));
}
Formula Formula::eventually(Formula f) {
    return Formula(std::make_shared<const Node>(Node{Kind::Eventually, {}, f.node_, nullptr}));
}
Formula Formula::weak_until(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::WeakUntil, {}, a.node_, b.node_}));
}
Formula Formula::until(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::Until, {}, a.node_, b.node_}));
}
Formula Formula::release(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::Release, {}, a.node_, b.node_}));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const ModalAtom& Formula::modal_atom() const { return node_->atom; }
Formula Formula::lhs() const { return Formula(node_->lhs); }
Formula Formula::rhs() const { return Formula(node_->rhs); }

size_t Formula::node_count() const {
    size_t n = 1;
    if (node_->lhs) n += Formula(node_->lhs).node_count();
    if (node_->rhs) n += Formula(node_->rhs).node_count();
    return n;
}

bool Formula::operator==(const Formula& o) const {
    if (node_ == o.node_) return true;
    if (node_->kind != o.node_->kind) return false;
    if (node_->kind == Kind::Atom) return node_->atom == o.node_->atom;
    bool lhs_eq = (node_->lhs == nullptr) == (o.node_->lhs == nullptr) &&
                  (!node_->lhs || Formula(node_->lhs) == Formula(o.node_->lhs));
    bool rhs_eq = (node_->rhs == nullptr) == (o.node_->rhs == nullptr) &&
                  (!node_->rhs || Formula(node_->rhs) == Formula(o.node_->rhs));
    return lhs_eq && rhs_eq;
}

namespace {

int precedence(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::Implies: return 1;
        case Formula::Kind::Or: return 2;
        case Formula::Kind::And: return 3;
        case Formula::Kind::WeakUntil:
        case Formula::Kind::Until:
        case Formula::Kind::Release: return 4;
        default: return 5;
    }
}

std::string render(const Formula& f, int parent_prec) {
    using K = Formula::Kind;
    int prec = precedence(f.kind());
    std::string s;
    switch (f.kind()) {
        case K::True: s = "true"; break;
        case K::False: s = "false"; break;
        case K::Atom: s = f.modal_atom().str(); break;
        case K::Not: s = "~" + render(f.lhs(), 5); break;
        case K::Always: s = "[] " + render(f.lhs(), 5); break;
        case K::Eventually: s = "<> " + render(f.lhs(), 5); break;
        case K::And: s = render(f.lhs(), prec) + " & " + render(f.rhs(), prec + 1); break;
        case K::Or: s = render(f.lhs(), prec) + " | " + render(f.rhs(), prec + 1); break;
        case K::Implies: s = render(f.lhs(), prec + 1) + " -> " + render(f.rhs(), prec); break;
        case K::WeakUntil: s = render(f.lhs(), prec + 1) + " W " + render(f.rhs(), prec + 1); break;
        case K::Until: s = render(f.lhs(), prec + 1) + " U " + render(f.rhs(), prec + 1); break;
        case K::Release: s = render(f.lhs(), prec + 1) + " R " + render(f.rhs(), prec + 1); break;
    }
    if (prec < parent_prec && f.kind() != K::True && f.kind() != K::False && f.kind() != K::Atom)
        return "(" + s + ")";
    return s;
}

}  // namespace

std::string Formula::str() const { return render(*this, 0); }

namespace {

Formula nnf(const Formula& f, bool negate) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::True: return negate ? Formula::ff() : Formula::tt();
        case K::False: return negate ? Formula::tt() : Formula::ff();
        case K::Atom:
            return negate ? Formula::negation(f) : f;
        case K::Not: return nnf(f.lhs(), !negate);
        case K::And: {
            Formula a = nnf(f.lhs(), negate), b = nnf(f.rhs(), negate);
            return negate ? Formula::disj(a, b) : Formula::conj(a, b);
        }
        case K::Or: {
            Formula a = nnf(f.lhs(), negate), b = nnf(f.rhs(), negate);
            return negate ? Formula::conj(a, b) : Formula::disj(a, b);
        }
        case K::Implies: {
            // a -> b == ~a | b
            Formula a = nnf(f.lhs(), !negate), b = nnf(f.rhs(), negate);
            return negate ? Formula::conj(a, b) : Formula::disj(a, b);
        }
        case K::Always: {
            // [] p == false R p ; ~[] p == true U ~p
            Formula p = nnf(f.lhs(), negate);
            return negate ? Formula::until(Formula::tt(), p) : Formula::release(Formula::ff(), p);
        }
        case K::Eventually: {
            // <> p == true U p ; ~<> p == false R ~p
            Formula p = nnf(f.lhs(), negate);
            return negate ? Formula::release(Formula::ff(), p) : Formula::until(Formula::tt(), p);
        }
        case K::WeakUntil: {
            // p W q == q R (p | q)
            Formula p = nnf(f.lhs(), negate), q = nnf(f.rhs(), negate);
            if (!negate) return Formula::release(q, Formula::disj(p, q));
            // ~(p W q) == ~q U (~p & ~q)
            return Formula::until(q, Formula::conj(p, q));
        }
        case K::Until: {
            Formula p = nnf(f.lhs(), negate), q = nnf(f.rhs(), negate);
            return negate ? Formula::release(p, q) : Formula::until(p, q);
        }
        case K::Release: {
            Formula p = nnf(f.lhs(), negate), q = nnf(f.rhs(), negate);
            return negate ? Formula::until(p, q) : Formula::release(p, q);
        }
    }
    return Formula::tt();
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

namespace {
void collect(const Formula& f, std::vector<ModalAtom>& out) {
    if (f.kind() == Formula::Kind::Atom) {
        if (std::find(out.begin(), out.end(), f.modal_atom()) == out.end())
            out.push_back(f.modal_atom());
        return;
    }
    switch (f.kind()) {
        case Formula::Kind::True:
        case Formula::Kind::False: return;
        case Formula::Kind::Not:
        case Formula::Kind::Always:
        case Formula::Kind::Eventually: collect(f.lhs(), out); return;
        default:
            collect(f.lhs(), out);
            collect(f.rhs(), out);
            return;
    }
}
}  // namespace

std::vector<ModalAtom> collect_atoms(const Formula& f) {
    std::vector<ModalAtom> out;
    collect(f, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> agents_of(const Formula& f) {
    std::vector<std::string> out;
    for (const ModalAtom& a : collect_atoms(f))
        if (std::find(out.begin(), out.end(), a.agent) == out.end()) out.push_back(a.agent);
    return out;
}

namespace {

using detail::Token;
using detail::TokenStream;

const std::vector<std::string> kFormulaOps = {"[]", "<>", "->", "(", ")", ",", "~", "&", "|"};

Formula parse_implies(TokenStream& ts);

Formula parse_primary(TokenStream& ts) {
    if (ts.accept_punct("(")) {
        Formula f = parse_implies(ts);
        ts.expect_punct(")");
        return f;
    }
    if (ts.accept_punct("~")) return Formula::negation(parse_primary(ts));
    if (ts.accept_punct("[]")) return Formula::always(parse_primary(ts));
    if (ts.accept_punct("<>")) return Formula::eventually(parse_primary(ts));
    const Token& t = ts.peek();
    if (t.is_ident("true")) {
        ts.next();
        return Formula::tt();
    }
    if (t.is_ident("false")) {
        ts.next();
        return Formula::ff();
    }
    AtomMod mod;
    if (t.is(Token::Kind::Var) && t.text == "B") mod = AtomMod::Belief;
    else if (t.is(Token::Kind::Var) && t.text == "G") mod = AtomMod::Goal;
    else if (t.is(Token::Kind::Var) && t.text == "D") mod = AtomMod::Does;
    else if (t.is(Token::Kind::Var) && t.text == "ItD") mod = AtomMod::IntendsToDo;
    else ts.fail("expected formula");
    ts.next();
    ts.expect_punct("(");
    ModalAtom atom;
    atom.mod = mod;
    atom.agent = ts.expect_ident();
    ts.expect_punct(",");
    atom.term = detail::parse_term(ts);
    ts.expect_punct(")");
    return Formula::atom(std::move(atom));
}

Formula parse_weak_until(TokenStream& ts) {
    Formula f = parse_primary(ts);
    while (ts.peek().is(Token::Kind::Var) && ts.peek().text == "W") {
        ts.next();
        f = Formula::weak_until(f, parse_primary(ts));
    }
    return f;
}

Formula parse_and(TokenStream& ts) {
    Formula f = parse_weak_until(ts);
    while (ts.accept_punct("&")) f = Formula::conj(f, parse_weak_until(ts));
    return f;
}

Formula parse_or(TokenStream& ts) {
    Formula f = parse_and(ts);
    while (ts.accept_punct("|")) f = Formula::disj(f, parse_and(ts));
    return f;
}

Formula parse_implies(TokenStream& ts) {
    Formula f = parse_or(ts);
    if (ts.accept_punct("->")) return Formula::implies(f, parse_implies(ts));
    return f;
}

}  // namespace

Formula parse_formula(const std::string& text) {
    detail::Lexer lex(text, kFormulaOps);
    TokenStream ts(lex.tokens());
    Formula f = parse_implies(ts);
    if (!ts.at_end()) ts.fail("trailing input after formula");
    return f;
}

std::vector<std::pair<std::string, Formula>> parse_property_file(const std::string& text,
                                                                 const std::string& stem) {
    std::vector<std::pair<std::string, Formula>> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string body = line;
        auto hash = body.find('#');
        if (hash != std::string::npos) body = body.substr(0, hash);
        if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string name = stem + ":" + std::to_string(out.size());
        auto eq = body.find('=');
        // `name = formula` binding: identifier before the first '='
        if (eq != std::string::npos) {
            std::string head = body.substr(0, eq);
            auto ws = head.find_first_not_of(" \t");
            auto we = head.find_last_not_of(" \t");
            if (ws != std::string::npos) {
                std::string candidate = head.substr(ws, we - ws + 1);
                if (!candidate.empty() &&
                    candidate.find_first_of(" \t()~&|<>[]") == std::string::npos) {
                    name = candidate;
                    body = body.substr(eq + 1);
                }
            }
        }
        try {
            out.emplace_back(name, parse_formula(body));
        } catch (const ParseError& e) {
            throw ParseError(std::string("property '") + name + "': " + e.what(), lineno, e.col,
                             e.token);
        }
    }
    return out;
}

}  // namespace plv
