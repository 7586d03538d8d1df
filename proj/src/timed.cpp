#include "plv/timed.hpp"

#include <algorithm>
#include <sstream>

namespace plv {

std::string to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Le: return "<=";
        case CmpOp::Ge: return ">=";
        case CmpOp::Eq: return "==";
    }
    return "?";
}

int TimedAutomaton::loc_index(const std::string& n) const {
    for (size_t i = 0; i < locations.size(); ++i) {
        if (locations[i].name == n) return static_cast<int>(i);
        for (const std::string& a : locations[i].aliases)
            if (a == n) return static_cast<int>(i);
    }
    return -1;
}

int TimedAutomaton::clock_index(const std::string& n) const {
    for (size_t i = 0; i < clocks.size(); ++i)
        if (clocks[i] == n) return static_cast<int>(i);
    return -1;
}

int TimedAutomaton::var_index(const std::string& n) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == n) return static_cast<int>(i);
    return -1;
}

void TimedAutomaton::validate() const {
    if (locations.empty()) throw ConfigError(name + ": no locations");
    if (initial < 0 || initial >= static_cast<int>(locations.size()))
        throw ConfigError(name + ": initial location out of range");
    if (vars.size() != var_init.size()) throw ConfigError(name + ": var_init size mismatch");
    auto check_guard = [&](const std::vector<GuardAtom>& g, bool allow_vars,
                           const std::string& where) {
        for (const GuardAtom& a : g) {
            if (a.bound < 0) throw ConfigError(name + ": negative bound in " + where);
            if (a.is_clock) {
                if (a.id < 0 || a.id >= static_cast<int>(clocks.size()))
                    throw ConfigError(name + ": undeclared clock in " + where);
            } else {
                if (!allow_vars) throw ConfigError(name + ": variable constraint in " + where);
                if (a.id < 0 || a.id >= static_cast<int>(vars.size()))
                    throw ConfigError(name + ": undeclared variable in " + where);
            }
        }
    };
    for (const TimedLocation& l : locations) check_guard(l.invariant, false, "invariant of " + l.name);
    for (const TimedEdge& e : edges) {
        if (e.src < 0 || e.src >= static_cast<int>(locations.size()) || e.dst < 0 ||
            e.dst >= static_cast<int>(locations.size()))
            throw ConfigError(name + ": edge endpoint out of range");
        check_guard(e.guard, true, "edge guard");
        for (int r : e.resets)
            if (r < 0 || r >= static_cast<int>(clocks.size()))
                throw ConfigError(name + ": reset of undeclared clock");
        for (const VarUpdate& u : e.updates) {
            if (u.var < 0 || u.var >= static_cast<int>(vars.size()))
                throw ConfigError(name + ": update of undeclared variable");
            if (u.from_var && (u.value < 0 || u.value >= static_cast<int>(vars.size())))
                throw ConfigError(name + ": update from undeclared variable");
        }
    }
}

int TimedNet::automaton_index(const std::string& n) const {
    for (size_t i = 0; i < automata.size(); ++i)
        if (automata[i].name == n) return static_cast<int>(i);
    return -1;
}

int TimedNet::channel_index(const std::string& n) const {
    for (size_t i = 0; i < channels.size(); ++i)
        if (channels[i] == n) return static_cast<int>(i);
    return -1;
}

void TimedNet::validate() const {
    for (const TimedAutomaton& a : automata) a.validate();
    for (const TimedAutomaton& a : automata)
        for (const TimedEdge& e : a.edges)
            if (e.channel >= static_cast<int>(channels.size()))
                throw ConfigError(a.name + ": edge references undeclared channel");
}

std::vector<std::vector<int>> TimedNet::clock_max_consts() const {
    std::vector<std::vector<int>> out;
    for (const TimedAutomaton& a : automata) {
        std::vector<int> m(a.clocks.size(), 0);
        auto scan = [&](const std::vector<GuardAtom>& g) {
            for (const GuardAtom& atom : g)
                if (atom.is_clock) m[atom.id] = std::max(m[atom.id], atom.bound);
        };
        for (const TimedLocation& l : a.locations) scan(l.invariant);
        for (const TimedEdge& e : a.edges) scan(e.guard);
        out.push_back(std::move(m));
    }
    return out;
}

TimedNet scale_clock_constants(const TimedNet& net, int k) {
    TimedNet out = net;
    for (TimedAutomaton& a : out.automata) {
        for (TimedLocation& l : a.locations)
            for (GuardAtom& g : l.invariant)
                if (g.is_clock) g.bound *= k;
        for (TimedEdge& e : a.edges)
            for (GuardAtom& g : e.guard)
                if (g.is_clock) g.bound *= k;
    }
    return out;
}

NetLayout::NetLayout(const TimedNet& net) {
    n_automata = static_cast<int>(net.automata.size());
    int off = n_automata;  // one location slot per automaton first
    for (const TimedAutomaton& a : net.automata) {
        clock_base.push_back(off);
        off += static_cast<int>(a.clocks.size());
    }
    for (const TimedAutomaton& a : net.automata) {
        var_base.push_back(off);
        off += static_cast<int>(a.vars.size());
    }
    total = off;
}

NetSemantics::NetSemantics(const TimedNet& net, int cap_extra,
                           const std::vector<std::vector<int>>& extra_consts)
    : net_(&net), layout_(net) {
    net.validate();
    caps_ = net.clock_max_consts();
    for (size_t a = 0; a < caps_.size(); ++a) {
        for (size_t c = 0; c < caps_[a].size(); ++c) {
            int extra = 0;
            if (a < extra_consts.size() && c < extra_consts[a].size())
                extra = extra_consts[a][c];
            caps_[a][c] = std::max(caps_[a][c], extra) + cap_extra;
        }
    }
}

TimedConfig NetSemantics::initial() const {
    TimedConfig c;
    c.data.assign(layout_.size(), 0);
    for (int a = 0; a < layout_.n_automata; ++a) {
        c.data[layout_.loc_offset(a)] = net_->automata[a].initial;
        const auto& vi = net_->automata[a].var_init;
        for (size_t v = 0; v < vi.size(); ++v)
            c.data[layout_.var_offset(a, static_cast<int>(v))] = vi[v];
    }
    if (!invariants_hold(c)) throw ConfigError("initial configuration violates an invariant");
    return c;
}

bool NetSemantics::guard_holds(int automaton, const std::vector<GuardAtom>& guard,
                               const TimedConfig& c) const {
    for (const GuardAtom& g : guard) {
        int v = g.is_clock ? c.data[layout_.clock_offset(automaton, g.id)]
                           : c.data[layout_.var_offset(automaton, g.id)];
        switch (g.op) {
            case CmpOp::Le:
                if (!(v <= g.bound)) return false;
                break;
            case CmpOp::Ge:
                if (!(v >= g.bound)) return false;
                break;
            case CmpOp::Eq:
                if (v != g.bound) return false;
                break;
        }
    }
    return true;
}

bool NetSemantics::location_inv_holds(int automaton, int loc, const TimedConfig& c) const {
    return guard_holds(automaton, net_->automata[automaton].locations[loc].invariant, c);
}

bool NetSemantics::invariants_hold(const TimedConfig& c) const {
    for (int a = 0; a < layout_.n_automata; ++a)
        if (!location_inv_holds(a, c.data[layout_.loc_offset(a)], c)) return false;
    return true;
}

void NetSemantics::apply_edge(int automaton, const TimedEdge& e, TimedConfig& c) const {
    c.data[layout_.loc_offset(automaton)] = e.dst;
    for (int r : e.resets) c.data[layout_.clock_offset(automaton, r)] = 0;
    for (const VarUpdate& u : e.updates) {
        int v = u.from_var ? c.data[layout_.var_offset(automaton, u.value)] : u.value;
        c.data[layout_.var_offset(automaton, u.var)] = v;
    }
}

std::vector<std::pair<TimedLabel, TimedConfig>> NetSemantics::successors(
    const TimedConfig& c) const {
    std::vector<std::pair<TimedLabel, TimedConfig>> out;

    // Unit delay with per-clock saturation at max constant + extra.
    {
        TimedConfig d = c;
        for (int a = 0; a < layout_.n_automata; ++a)
            for (size_t cl = 0; cl < net_->automata[a].clocks.size(); ++cl) {
                int32_t& v = d.data[layout_.clock_offset(a, static_cast<int>(cl))];
                if (v < caps_[a][cl]) ++v;
            }
        if (invariants_hold(d)) {
            TimedLabel l;
            l.kind = TimedLabel::Kind::Delay;
            out.emplace_back(l, std::move(d));
        }
    }

    // Internal edges.
    for (int a = 0; a < layout_.n_automata; ++a) {
        int loc = c.data[layout_.loc_offset(a)];
        const TimedAutomaton& ta = net_->automata[a];
        for (size_t ei = 0; ei < ta.edges.size(); ++ei) {
            const TimedEdge& e = ta.edges[ei];
            if (e.src != loc || e.channel != -1) continue;
            if (!guard_holds(a, e.guard, c)) continue;
            TimedConfig d = c;
            apply_edge(a, e, d);
            if (!location_inv_holds(a, e.dst, d)) continue;
            TimedLabel l;
            l.kind = TimedLabel::Kind::Internal;
            l.automaton = a;
            l.edge = static_cast<int>(ei);
            out.emplace_back(l, std::move(d));
        }
    }

    // Binary synchronizations: one sender and one receiver edge pair.
    for (int a = 0; a < layout_.n_automata; ++a) {
        const TimedAutomaton& ta = net_->automata[a];
        int loca = c.data[layout_.loc_offset(a)];
        for (size_t ei = 0; ei < ta.edges.size(); ++ei) {
            const TimedEdge& es = ta.edges[ei];
            if (es.src != loca || es.channel < 0 || !es.send) continue;
            if (!guard_holds(a, es.guard, c)) continue;
            for (int b = 0; b < layout_.n_automata; ++b) {
                if (b == a) continue;
                const TimedAutomaton& tb = net_->automata[b];
                int locb = c.data[layout_.loc_offset(b)];
                for (size_t ej = 0; ej < tb.edges.size(); ++ej) {
                    const TimedEdge& er = tb.edges[ej];
                    if (er.src != locb || er.channel != es.channel || er.send) continue;
                    if (!guard_holds(b, er.guard, c)) continue;
                    TimedConfig d = c;
                    apply_edge(a, es, d);
                    apply_edge(b, er, d);
                    if (!location_inv_holds(a, es.dst, d)) continue;
                    if (!location_inv_holds(b, er.dst, d)) continue;
                    TimedLabel l;
                    l.kind = TimedLabel::Kind::Sync;
                    l.automaton = a;
                    l.edge = static_cast<int>(ei);
                    l.partner_automaton = b;
                    l.partner_edge = static_cast<int>(ej);
                    out.emplace_back(l, std::move(d));
                }
            }
        }
    }
    return out;
}

std::string NetSemantics::describe(const TimedLabel& l) const {
    switch (l.kind) {
        case TimedLabel::Kind::Delay:
            return "delay 1";
        case TimedLabel::Kind::Internal: {
            const auto& a = net_->automata[l.automaton];
            const auto& e = a.edges[l.edge];
            return a.name + ": " + (e.action.empty() ? "internal" : e.action);
        }
        case TimedLabel::Kind::Sync: {
            const auto& a = net_->automata[l.automaton];
            const auto& b = net_->automata[l.partner_automaton];
            const auto& e = a.edges[l.edge];
            std::string ch = e.channel >= 0 ? net_->channels[e.channel] : "?";
            return "sync " + ch + " (" + a.name + " -> " + b.name + ")";
        }
    }
    return "?";
}

std::string NetSemantics::describe(const TimedConfig& c) const {
    std::ostringstream os;
    for (int a = 0; a < layout_.n_automata; ++a) {
        const TimedAutomaton& ta = net_->automata[a];
        if (a) os << " ";
        os << ta.name << "." << ta.locations[c.data[layout_.loc_offset(a)]].name;
        for (size_t cl = 0; cl < ta.clocks.size(); ++cl)
            os << " " << ta.clocks[cl] << "=" << c.data[layout_.clock_offset(a, cl)];
        for (size_t v = 0; v < ta.vars.size(); ++v)
            os << " " << ta.vars[v] << "=" << c.data[layout_.var_offset(a, v)];
    }
    return os.str();
}

int NetSemantics::clock_value(const TimedConfig& c, const std::string& automaton,
                              const std::string& clock) const {
    int a = net_->automaton_index(automaton);
    if (a < 0) throw ConfigError("unknown automaton " + automaton);
    int cl = net_->automata[a].clock_index(clock);
    if (cl < 0) throw ConfigError("unknown clock " + clock);
    return c.data[layout_.clock_offset(a, cl)];
}

}  // namespace plv
