#include "plv/timed_props.hpp"

#include <sstream>

#include "lexer.hpp"

namespace plv {

struct StatePred::Node {
    Kind kind = Kind::True;
    std::string automaton, item;
    CmpOp op = CmpOp::Le;
    int bound = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

StatePred StatePred::truth() { return StatePred(std::make_shared<const Node>()); }

StatePred StatePred::loc(std::string automaton, std::string location) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Loc;
    n->automaton = std::move(automaton);
    n->item = std::move(location);
    return StatePred(n);
}

StatePred StatePred::clock_cmp(std::string automaton, std::string clock, CmpOp op, int bound) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::ClockCmp;
    n->automaton = std::move(automaton);
    n->item = std::move(clock);
    n->op = op;
    n->bound = bound;
    return StatePred(n);
}

StatePred StatePred::var_cmp(std::string automaton, std::string var, CmpOp op, int bound) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::VarCmp;
    n->automaton = std::move(automaton);
    n->item = std::move(var);
    n->op = op;
    n->bound = bound;
    return StatePred(n);
}

StatePred StatePred::negation(StatePred p) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->lhs = p.node_;
    return StatePred(n);
}

StatePred StatePred::conj(StatePred a, StatePred b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->lhs = a.node_;
    n->rhs = b.node_;
    return StatePred(n);
}

StatePred StatePred::disj(StatePred a, StatePred b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->lhs = a.node_;
    n->rhs = b.node_;
    return StatePred(n);
}

StatePred StatePred::imply(StatePred a, StatePred b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Imply;
    n->lhs = a.node_;
    n->rhs = b.node_;
    return StatePred(n);
}

StatePred::Kind StatePred::kind() const { return node_->kind; }

namespace {
int prec_of(StatePred::Kind k) {
    switch (k) {
        case StatePred::Kind::Imply: return 1;
        case StatePred::Kind::Or: return 2;
        case StatePred::Kind::And: return 3;
        default: return 4;
    }
}
}  // namespace

std::string StatePred::str() const {
    const Node& n = *node_;
    auto wrap = [&](const StatePred& child) {
        std::string s = child.str();
        if (prec_of(child.kind()) < prec_of(n.kind)) return "(" + s + ")";
        return s;
    };
    switch (n.kind) {
        case Kind::True: return "true";
        case Kind::Loc: return n.automaton + "." + n.item;
        case Kind::ClockCmp:
        case Kind::VarCmp:
            return n.automaton + "." + n.item + " " + to_string(n.op) + " " +
                   std::to_string(n.bound);
        case Kind::Not: {
            StatePred c(n.lhs);
            std::string s = c.str();
            if (prec_of(c.kind()) < 4) s = "(" + s + ")";
            return "!" + s;
        }
        case Kind::And: return wrap(StatePred(n.lhs)) + " && " + wrap(StatePred(n.rhs));
        case Kind::Or: return wrap(StatePred(n.lhs)) + " || " + wrap(StatePred(n.rhs));
        case Kind::Imply: {
            StatePred l(n.lhs), r(n.rhs);
            std::string ls = l.str();
            if (prec_of(l.kind()) <= prec_of(n.kind)) ls = "(" + ls + ")";
            return ls + " imply " + wrap(r);
        }
    }
    return "?";
}

bool StatePred::eval(const NetSemantics& sem, const TimedConfig& c) const {
    const Node& n = *node_;
    const TimedNet& net = sem.net();
    const NetLayout& lay = sem.layout();
    switch (n.kind) {
        case Kind::True:
            return true;
        case Kind::Loc: {
            int a = net.automaton_index(n.automaton);
            if (a < 0) throw ConfigError("unknown automaton in predicate: " + n.automaton);
            int loc = net.automata[a].loc_index(n.item);
            if (loc < 0)
                throw ConfigError("unknown location " + n.automaton + "." + n.item);
            int cur = c.data[lay.loc_offset(a)];
            if (cur == loc) return true;
            // aliases may map several concrete locations to one name
            const auto& lcur = net.automata[a].locations[cur];
            for (const std::string& al : lcur.aliases)
                if (al == n.item) return true;
            return false;
        }
        case Kind::ClockCmp: {
            int a = net.automaton_index(n.automaton);
            if (a < 0) throw ConfigError("unknown automaton in predicate: " + n.automaton);
            int cl = net.automata[a].clock_index(n.item);
            if (cl < 0) throw ConfigError("unknown clock " + n.automaton + "." + n.item);
            int v = c.data[lay.clock_offset(a, cl)];
            switch (n.op) {
                case CmpOp::Le: return v <= n.bound;
                case CmpOp::Ge: return v >= n.bound;
                case CmpOp::Eq: return v == n.bound;
            }
            return false;
        }
        case Kind::VarCmp: {
            // parsed comparisons are deferred: the name may denote either a
            // variable or a clock of the automaton
            int a = net.automaton_index(n.automaton);
            if (a < 0) throw ConfigError("unknown automaton in predicate: " + n.automaton);
            int vi = net.automata[a].var_index(n.item);
            int v;
            if (vi >= 0) {
                v = c.data[lay.var_offset(a, vi)];
            } else {
                int cl = net.automata[a].clock_index(n.item);
                if (cl < 0)
                    throw ConfigError("unknown variable or clock " + n.automaton + "." + n.item);
                v = c.data[lay.clock_offset(a, cl)];
            }
            switch (n.op) {
                case CmpOp::Le: return v <= n.bound;
                case CmpOp::Ge: return v >= n.bound;
                case CmpOp::Eq: return v == n.bound;
            }
            return false;
        }
        case Kind::Not:
            return !StatePred(n.lhs).eval(sem, c);
        case Kind::And:
            return StatePred(n.lhs).eval(sem, c) && StatePred(n.rhs).eval(sem, c);
        case Kind::Or:
            return StatePred(n.lhs).eval(sem, c) || StatePred(n.rhs).eval(sem, c);
        case Kind::Imply:
            return !StatePred(n.lhs).eval(sem, c) || StatePred(n.rhs).eval(sem, c);
    }
    return false;
}

namespace {
// Does the (possibly deferred) comparison name a clock of this net?
int resolve_clock(const TimedNet& net, const std::string& automaton, const std::string& item,
                  int& a_out) {
    int a = net.automaton_index(automaton);
    a_out = a;
    if (a < 0) return -1;
    return net.automata[a].clock_index(item);
}
}  // namespace

void StatePred::collect_clock_consts(const TimedNet& net,
                                     std::vector<std::vector<int>>& out) const {
    const Node& n = *node_;
    if (n.kind == Kind::ClockCmp || n.kind == Kind::VarCmp) {
        int a = -1;
        int cl = resolve_clock(net, n.automaton, n.item, a);
        if (cl >= 0) {
            if (out.size() < net.automata.size()) out.resize(net.automata.size());
            if (out[a].size() < net.automata[a].clocks.size())
                out[a].resize(net.automata[a].clocks.size(), 0);
            out[a][cl] = std::max(out[a][cl], n.bound);
        }
        return;
    }
    if (n.lhs) StatePred(n.lhs).collect_clock_consts(net, out);
    if (n.rhs) StatePred(n.rhs).collect_clock_consts(net, out);
}

StatePred StatePred::scaled(const TimedNet& net, int k) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::ClockCmp:
            return clock_cmp(n.automaton, n.item, n.op, n.bound * k);
        case Kind::VarCmp: {
            int a = -1;
            if (resolve_clock(net, n.automaton, n.item, a) >= 0)
                return var_cmp(n.automaton, n.item, n.op, n.bound * k);
            return *this;
        }
        case Kind::Not:
            return negation(StatePred(n.lhs).scaled(net, k));
        case Kind::And:
            return conj(StatePred(n.lhs).scaled(net, k), StatePred(n.rhs).scaled(net, k));
        case Kind::Or:
            return disj(StatePred(n.lhs).scaled(net, k), StatePred(n.rhs).scaled(net, k));
        case Kind::Imply:
            return imply(StatePred(n.lhs).scaled(net, k), StatePred(n.rhs).scaled(net, k));
        default:
            return *this;
    }
}

std::string TimedProperty::str() const {
    if (kind == Kind::Invariant) return "A[] (" + lhs.str() + ")";
    return lhs.str() + " --> " + rhs.str();
}

TimedProperty TimedProperty::scaled(const TimedNet& net, int k) const {
    TimedProperty p = *this;
    p.lhs = lhs.scaled(net, k);
    p.rhs = rhs.scaled(net, k);
    return p;
}

namespace {

using detail::Token;
using detail::TokenStream;

const std::vector<std::string> kPredOps = {"A[]", "-->", "&&", "||", "<=", ">=", "==",
                                           "(",   ")",   "!",  "."};

StatePred parse_imply(TokenStream& ts);

StatePred parse_atom_or_group(TokenStream& ts) {
    if (ts.accept_punct("(")) {
        StatePred p = parse_imply(ts);
        ts.expect_punct(")");
        return p;
    }
    if (ts.accept_punct("!")) return StatePred::negation(parse_atom_or_group(ts));
    if (ts.accept_ident("true")) return StatePred::truth();
    std::string automaton = ts.expect_ident();
    ts.expect_punct(".");
    std::string item = ts.expect_ident();
    CmpOp op;
    if (ts.accept_punct("<="))
        op = CmpOp::Le;
    else if (ts.accept_punct(">="))
        op = CmpOp::Ge;
    else if (ts.accept_punct("=="))
        op = CmpOp::Eq;
    else
        return StatePred::loc(automaton, item);
    if (!ts.peek().is(Token::Kind::Int)) ts.fail("expected integer bound");
    int bound = static_cast<int>(ts.next().value);
    // clock vs variable is resolved at evaluation time against the net; the
    // textual form carries no distinction, so record as a "deferred" compare.
    return StatePred::var_cmp(automaton, item, op, bound);
}

StatePred parse_and(TokenStream& ts) {
    StatePred p = parse_atom_or_group(ts);
    while (ts.accept_punct("&&")) p = StatePred::conj(p, parse_atom_or_group(ts));
    return p;
}

StatePred parse_or(TokenStream& ts) {
    StatePred p = parse_and(ts);
    while (ts.accept_punct("||")) p = StatePred::disj(p, parse_and(ts));
    return p;
}

StatePred parse_imply(TokenStream& ts) {
    StatePred p = parse_or(ts);
    if (ts.accept_ident("imply")) return StatePred::imply(p, parse_imply(ts));
    return p;
}

}  // namespace

TimedProperty parse_timed_property(const std::string& name, const std::string& text) {
    detail::Lexer lex(text, kPredOps);
    TokenStream ts(lex.tokens());
    TimedProperty p;
    p.name = name;
    p.lhs = StatePred::truth();
    p.rhs = StatePred::truth();
    if (ts.accept_punct("A[]")) {
        p.kind = TimedProperty::Kind::Invariant;
        p.lhs = parse_imply(ts);
    } else {
        p.kind = TimedProperty::Kind::LeadsTo;
        p.lhs = parse_imply(ts);
        ts.expect_punct("-->");
        p.rhs = parse_imply(ts);
    }
    if (!ts.at_end()) ts.fail("trailing input after property");
    return p;
}

std::vector<TimedProperty> parse_timed_property_file(const std::string& text,
                                                     const std::string& stem) {
    std::vector<TimedProperty> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string name = stem + ":" + std::to_string(out.size());
        auto eq = line.find('=');
        // avoid mistaking == for a name binding
        if (eq != std::string::npos && eq + 1 < line.size() && line[eq + 1] != '=') {
            std::string head = line.substr(0, eq);
            auto ws = head.find_first_not_of(" \t");
            auto we = head.find_last_not_of(" \t");
            if (ws != std::string::npos) {
                std::string candidate = head.substr(ws, we - ws + 1);
                if (candidate.find_first_of(" \t().!&|") == std::string::npos) {
                    name = candidate;
                    line = line.substr(eq + 1);
                }
            }
        }
        out.push_back(parse_timed_property(name, line));
    }
    return out;
}

}  // namespace plv
