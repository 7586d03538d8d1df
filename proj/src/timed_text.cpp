#include "plv/timed_text.hpp"

#include <cctype>
#include <sstream>

#include "lexer.hpp"

namespace plv {

namespace {

std::string guard_text(const TimedAutomaton& a, const std::vector<GuardAtom>& g) {
    std::string s;
    for (size_t i = 0; i < g.size(); ++i) {
        if (i) s += ", ";
        const GuardAtom& atom = g[i];
        s += atom.is_clock ? a.clocks[atom.id] : a.vars[atom.id];
        s += " " + to_string(atom.op) + " " + std::to_string(atom.bound);
    }
    return s;
}

}  // namespace

std::string serialize_net(const TimedNet& net) {
    std::ostringstream os;
    os << "net " << net.name << "\n\n";
    for (const std::string& c : net.channels) os << "channel " << c << "\n";
    os << "\n";
    for (const TimedAutomaton& a : net.automata) {
        os << "automaton " << a.name << " {\n";
        for (const std::string& c : a.clocks) os << "  clock " << c << "\n";
        for (size_t v = 0; v < a.vars.size(); ++v)
            os << "  var " << a.vars[v] << " = " << a.var_init[v] << "\n";
        for (const TimedLocation& l : a.locations) {
            os << "  location " << l.name << " {";
            bool any = false;
            if (!l.invariant.empty()) {
                os << " inv " << guard_text(a, l.invariant) << ";";
                any = true;
            }
            if (!l.aliases.empty()) {
                os << " alias ";
                for (size_t i = 0; i < l.aliases.size(); ++i)
                    os << (i ? ", " : "") << l.aliases[i];
                os << ";";
                any = true;
            }
            os << (any ? " " : "") << "}\n";
        }
        os << "  init " << a.locations[a.initial].name << "\n";
        for (const TimedEdge& e : a.edges) {
            os << "  edge " << a.locations[e.src].name << " -> " << a.locations[e.dst].name
               << " {";
            if (!e.guard.empty()) os << " guard " << guard_text(a, e.guard) << ";";
            if (e.channel >= 0)
                os << " sync " << net.channels[e.channel] << (e.send ? "!" : "?") << ";";
            if (!e.resets.empty()) {
                os << " reset ";
                for (size_t i = 0; i < e.resets.size(); ++i)
                    os << (i ? ", " : "") << a.clocks[e.resets[i]];
                os << ";";
            }
            for (const VarUpdate& u : e.updates) {
                os << " set " << a.vars[u.var] << " = "
                   << (u.from_var ? a.vars[u.value] : std::to_string(u.value)) << ";";
            }
            os << " }\n";
        }
        os << "}\n\n";
    }
    return os.str();
}

namespace {

using detail::Token;
using detail::TokenStream;

const std::vector<std::string> kNetOps = {"->", "<=", ">=", "==", "{", "}",
                                          ",",  ";",  "!",  "?",  "="};

struct NetParser {
    TokenStream& ts;
    TimedNet net;

    // symbolic names resolved in a second pass
    struct PendingEdge {
        int automaton;
        std::string src, dst, sync;
        bool send = false;
        std::vector<std::tuple<std::string, CmpOp, int>> guards;
        std::vector<std::string> resets;
        std::vector<std::pair<std::string, std::string>> sets;
    };
    std::vector<PendingEdge> pending;
    std::vector<std::pair<int, std::string>> pending_init;

    explicit NetParser(TokenStream& t) : ts(t) {}

    std::string ident_or_var() {
        const Token& t = ts.peek();
        if (t.is(Token::Kind::Ident) || t.is(Token::Kind::Var)) return ts.next().text;
        ts.fail("expected name");
    }

    CmpOp parse_op() {
        if (ts.accept_punct("<=")) return CmpOp::Le;
        if (ts.accept_punct(">=")) return CmpOp::Ge;
        if (ts.accept_punct("==")) return CmpOp::Eq;
        ts.fail("expected comparison operator");
    }

    std::vector<std::tuple<std::string, CmpOp, int>> parse_constraints() {
        std::vector<std::tuple<std::string, CmpOp, int>> out;
        while (true) {
            std::string name = ident_or_var();
            CmpOp op = parse_op();
            if (!ts.peek().is(Token::Kind::Int)) ts.fail("expected integer bound");
            int bound = static_cast<int>(ts.next().value);
            out.emplace_back(name, op, bound);
            if (!ts.accept_punct(",")) break;
        }
        return out;
    }

    void parse_location(TimedAutomaton& a) {
        TimedLocation l;
        l.name = ident_or_var();
        ts.expect_punct("{");
        while (!ts.accept_punct("}")) {
            if (ts.accept_ident("inv")) {
                for (auto& [name, op, bound] : parse_constraints()) {
                    int c = a.clock_index(name);
                    if (c < 0) ts.fail("invariant on undeclared clock '" + name + "'");
                    l.invariant.push_back({true, c, op, bound});
                }
                ts.expect_punct(";");
            } else if (ts.accept_ident("alias")) {
                while (true) {
                    l.aliases.push_back(ident_or_var());
                    if (!ts.accept_punct(",")) break;
                }
                ts.expect_punct(";");
            } else {
                ts.fail("expected 'inv', 'alias' or '}'");
            }
        }
        a.locations.push_back(std::move(l));
    }

    void parse_edge(int ai) {
        PendingEdge pe;
        pe.automaton = ai;
        pe.src = ident_or_var();
        ts.expect_punct("->");
        pe.dst = ident_or_var();
        ts.expect_punct("{");
        while (!ts.accept_punct("}")) {
            if (ts.accept_ident("guard")) {
                pe.guards = parse_constraints();
                ts.expect_punct(";");
            } else if (ts.accept_ident("sync")) {
                pe.sync = ident_or_var();
                if (ts.accept_punct("!"))
                    pe.send = true;
                else {
                    ts.expect_punct("?");
                    pe.send = false;
                }
                ts.expect_punct(";");
            } else if (ts.accept_ident("reset")) {
                while (true) {
                    pe.resets.push_back(ident_or_var());
                    if (!ts.accept_punct(",")) break;
                }
                ts.expect_punct(";");
            } else if (ts.accept_ident("set")) {
                std::string var = ident_or_var();
                ts.expect_punct("=");
                std::string value;
                if (ts.peek().is(Token::Kind::Int))
                    value = std::to_string(ts.next().value);
                else
                    value = ident_or_var();
                pe.sets.emplace_back(var, value);
                ts.expect_punct(";");
            } else {
                ts.fail("expected edge attribute");
            }
        }
        pending.push_back(std::move(pe));
    }

    void parse_automaton() {
        TimedAutomaton a;
        a.name = ident_or_var();
        int ai = static_cast<int>(net.automata.size());
        ts.expect_punct("{");
        while (!ts.accept_punct("}")) {
            if (ts.accept_ident("clock")) {
                a.clocks.push_back(ident_or_var());
            } else if (ts.accept_ident("var")) {
                std::string n = ident_or_var();
                ts.expect_punct("=");
                if (!ts.peek().is(Token::Kind::Int)) ts.fail("expected initial value");
                a.vars.push_back(n);
                a.var_init.push_back(static_cast<int>(ts.next().value));
            } else if (ts.accept_ident("location")) {
                parse_location(a);
            } else if (ts.accept_ident("init")) {
                pending_init.emplace_back(ai, ident_or_var());
            } else if (ts.accept_ident("edge")) {
                parse_edge(ai);
            } else {
                ts.fail("expected automaton item");
            }
        }
        net.automata.push_back(std::move(a));
    }

    TimedNet run() {
        if (!ts.accept_ident("net")) ts.fail("expected 'net'");
        net.name = ident_or_var();
        while (!ts.at_end()) {
            if (ts.accept_ident("channel")) {
                net.channels.push_back(ident_or_var());
            } else if (ts.accept_ident("automaton")) {
                parse_automaton();
            } else {
                ts.fail("expected 'channel' or 'automaton'");
            }
        }
        for (auto& [ai, name] : pending_init) {
            int loc = net.automata[ai].loc_index(name);
            if (loc < 0) throw ConfigError("init references unknown location " + name);
            net.automata[ai].initial = loc;
        }
        for (const PendingEdge& pe : pending) {
            TimedAutomaton& a = net.automata[pe.automaton];
            TimedEdge e;
            e.src = a.loc_index(pe.src);
            e.dst = a.loc_index(pe.dst);
            if (e.src < 0 || e.dst < 0)
                throw ConfigError(a.name + ": edge references unknown location " + pe.src +
                                  " or " + pe.dst);
            for (auto& [name, op, bound] : pe.guards) {
                int c = a.clock_index(name);
                if (c >= 0) {
                    e.guard.push_back({true, c, op, bound});
                    continue;
                }
                int v = a.var_index(name);
                if (v < 0) throw ConfigError(a.name + ": guard on undeclared name " + name);
                e.guard.push_back({false, v, op, bound});
            }
            if (!pe.sync.empty()) {
                e.channel = net.channel_index(pe.sync);
                if (e.channel < 0) throw ConfigError("sync on undeclared channel " + pe.sync);
                e.send = pe.send;
            }
            for (const std::string& r : pe.resets) {
                int c = a.clock_index(r);
                if (c < 0) throw ConfigError(a.name + ": reset of undeclared clock " + r);
                e.resets.push_back(c);
            }
            for (auto& [var, value] : pe.sets) {
                int v = a.var_index(var);
                if (v < 0) throw ConfigError(a.name + ": set of undeclared variable " + var);
                VarUpdate u;
                u.var = v;
                if (!value.empty() && (std::isdigit(static_cast<unsigned char>(value[0])))) {
                    u.from_var = false;
                    u.value = std::stoi(value);
                } else {
                    int src = a.var_index(value);
                    if (src < 0)
                        throw ConfigError(a.name + ": set from undeclared variable " + value);
                    u.from_var = true;
                    u.value = src;
                }
                e.updates.push_back(u);
            }
            a.edges.push_back(std::move(e));
        }
        net.validate();
        return net;
    }
};

}  // namespace

TimedNet parse_net(const std::string& text) {
    detail::Lexer lex(text, kNetOps);
    TokenStream ts(lex.tokens());
    NetParser p(ts);
    return p.run();
}

}  // namespace plv
