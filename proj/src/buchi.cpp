#include "plv/buchi.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "plv/diagnostics.hpp"

namespace plv {

namespace {

// Indexed view of the NNF subformula closure. Kinds here mirror Formula but
// reference children by table index.
struct SubTable {
    struct Entry {
        Formula::Kind kind;
        int lhs = -1, rhs = -1;
        int atom = -1;  // index into atoms for Atom / Not(Atom)
    };
    std::vector<Entry> entries;
    std::vector<Formula> formulas;
    std::vector<ModalAtom> atoms;

    int atom_index(const ModalAtom& a) {
        for (size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i] == a) return static_cast<int>(i);
        atoms.push_back(a);
        return static_cast<int>(atoms.size()) - 1;
    }

    int intern(const Formula& f) {
        for (size_t i = 0; i < formulas.size(); ++i)
            if (formulas[i] == f) return static_cast<int>(i);
        Entry e;
        e.kind = f.kind();
        switch (f.kind()) {
            case Formula::Kind::True:
            case Formula::Kind::False:
                break;
            case Formula::Kind::Atom:
                e.atom = atom_index(f.modal_atom());
                break;
            case Formula::Kind::Not:
                e.lhs = intern(f.lhs());
                e.atom = entries[e.lhs].atom;
                break;
            case Formula::Kind::And:
            case Formula::Kind::Or:
            case Formula::Kind::Until:
            case Formula::Kind::Release:
                e.lhs = intern(f.lhs());
                e.rhs = intern(f.rhs());
                break;
            default:
                throw ConfigError("ltl_to_buchi: formula not in negation normal form: " +
                                  f.str());
        }
        formulas.push_back(f);
        entries.push_back(e);
        return static_cast<int>(entries.size()) - 1;
    }

    bool is_literal(int i) const {
        auto k = entries[i].kind;
        return k == Formula::Kind::True || k == Formula::Kind::False ||
               k == Formula::Kind::Atom || k == Formula::Kind::Not;
    }
};

struct GNode {
    std::set<int> incoming;  // -1 marks the initial marker
    std::set<int> news, olds, nexts;
};

struct Builder {
    SubTable table;
    int node_bound;
    std::vector<GNode> nodes;                               // settled nodes
    std::map<std::pair<std::set<int>, std::set<int>>, int> index;  // (olds, nexts) -> id
    int created = 0;

    explicit Builder(int bound) : node_bound(bound) {}

    void bump() {
        if (++created > node_bound)
            throw BoundError("ltl_to_buchi: tableau node bound exceeded (" +
                             std::to_string(node_bound) + ")");
    }

    // Negation of a literal entry, interned on demand.
    bool contradicts(int lit, const std::set<int>& olds) {
        const auto& e = table.entries[lit];
        if (e.kind == Formula::Kind::False) return true;
        for (int o : olds) {
            const auto& oe = table.entries[o];
            if (e.kind == Formula::Kind::Atom && oe.kind == Formula::Kind::Not &&
                oe.atom == e.atom)
                return true;
            if (e.kind == Formula::Kind::Not && oe.kind == Formula::Kind::Atom &&
                oe.atom == e.atom)
                return true;
        }
        return false;
    }

    void expand(GNode node) {
        bump();
        if (node.news.empty()) {
            auto key = std::make_pair(node.olds, node.nexts);
            auto it = index.find(key);
            if (it != index.end()) {
                for (int in : node.incoming) nodes[it->second].incoming.insert(in);
                return;
            }
            int id = static_cast<int>(nodes.size());
            nodes.push_back(node);
            index[key] = id;
            GNode succ;
            succ.incoming = {id};
            succ.news = node.nexts;
            expand(std::move(succ));
            return;
        }
        int eta = *node.news.begin();
        node.news.erase(node.news.begin());
        const auto& e = table.entries[eta];
        if (node.olds.count(eta)) {
            expand(std::move(node));
            return;
        }
        if (table.is_literal(eta)) {
            if (e.kind == Formula::Kind::False || contradicts(eta, node.olds)) return;  // pruned
            if (e.kind != Formula::Kind::True) node.olds.insert(eta);
            expand(std::move(node));
            return;
        }
        switch (e.kind) {
            case Formula::Kind::And: {
                node.olds.insert(eta);
                if (!node.olds.count(e.lhs)) node.news.insert(e.lhs);
                if (!node.olds.count(e.rhs)) node.news.insert(e.rhs);
                expand(std::move(node));
                return;
            }
            case Formula::Kind::Or: {
                GNode left = node, right = node;
                left.olds.insert(eta);
                right.olds.insert(eta);
                if (!left.olds.count(e.lhs)) left.news.insert(e.lhs);
                if (!right.olds.count(e.rhs)) right.news.insert(e.rhs);
                expand(std::move(left));
                expand(std::move(right));
                return;
            }
            case Formula::Kind::Until: {
                // mu U psi: either psi now, or mu now and the until next.
                GNode now = node, later = node;
                now.olds.insert(eta);
                later.olds.insert(eta);
                if (!now.olds.count(e.rhs)) now.news.insert(e.rhs);
                if (!later.olds.count(e.lhs)) later.news.insert(e.lhs);
                later.nexts.insert(eta);
                expand(std::move(later));
                expand(std::move(now));
                return;
            }
            case Formula::Kind::Release: {
                // mu R psi: psi now, and either mu now or the release next.
                GNode both = node, cont = node;
                both.olds.insert(eta);
                cont.olds.insert(eta);
                if (!both.olds.count(e.lhs)) both.news.insert(e.lhs);
                if (!both.olds.count(e.rhs)) both.news.insert(e.rhs);
                if (!cont.olds.count(e.rhs)) cont.news.insert(e.rhs);
                cont.nexts.insert(eta);
                expand(std::move(both));
                expand(std::move(cont));
                return;
            }
            default:
                throw ConfigError("ltl_to_buchi: unexpected connective");
        }
    }
};

}  // namespace

BuchiAutomaton ltl_to_buchi(const Formula& f, int node_bound) {
    Formula nnf = to_nnf(f);
    Builder b(node_bound);
    int root = b.table.intern(nnf);

    GNode init;
    init.incoming = {-1};
    init.news = {root};
    b.expand(std::move(init));

    int n = static_cast<int>(b.nodes.size());
    const auto& atoms = b.table.atoms;

    // Guard of entering a node: its literal old-set.
    auto guard_of = [&](const GNode& nd) {
        std::vector<int8_t> g(atoms.size(), 0);
        for (int o : nd.olds) {
            const auto& e = b.table.entries[o];
            if (e.kind == Formula::Kind::Atom) g[e.atom] = 1;
            if (e.kind == Formula::Kind::Not) g[e.atom] = -1;
        }
        return g;
    };

    // Generalized acceptance: one set per Until subformula.
    std::vector<int> untils;
    for (size_t i = 0; i < b.table.entries.size(); ++i)
        if (b.table.entries[i].kind == Formula::Kind::Until) untils.push_back(static_cast<int>(i));
    int k = static_cast<int>(untils.size());

    auto sets_of = [&](const GNode& nd) {
        std::vector<bool> in(k, false);
        for (int j = 0; j < k; ++j) {
            int u = untils[j];
            int psi = b.table.entries[u].rhs;
            in[j] = !nd.olds.count(u) || nd.olds.count(psi);
        }
        return in;
    };

    BuchiAutomaton out;
    out.atoms = atoms;

    // A distinguished pre-initial state makes every position of the word,
    // including the first, be consumed by exactly one transition. Entry
    // guards of tableau start nodes then constrain the first letter.
    if (k == 0) {
        int pre = n;
        out.edges.assign(n + 1, {});
        out.accepting.assign(n + 1, true);
        out.accepting[pre] = false;
        out.initial.push_back(pre);
        for (int t = 0; t < n; ++t) {
            auto g = guard_of(b.nodes[t]);
            for (int src : b.nodes[t].incoming) {
                if (src == -1)
                    out.edges[pre].push_back({t, g});
                else
                    out.edges[src].push_back({t, g});
            }
        }
        return out;
    }

    // Degeneralization: counter 0..k tracks the next awaited set; k marks a
    // completed round and is the accepting layer.
    auto advance = [&](int counter, const std::vector<bool>& in) {
        int c = counter == k ? 0 : counter;
        while (c < k && in[c]) ++c;
        return c;
    };

    int m = n * (k + 1) + 1;
    int pre = m - 1;
    out.edges.assign(m, {});
    out.accepting.assign(m, false);
    out.initial.push_back(pre);
    auto sid = [&](int node, int counter) { return node * (k + 1) + counter; };
    for (int t = 0; t < n; ++t)
        out.accepting[sid(t, k)] = true;

    std::vector<std::vector<bool>> insets(n);
    std::vector<std::vector<int8_t>> guards(n);
    for (int t = 0; t < n; ++t) {
        insets[t] = sets_of(b.nodes[t]);
        guards[t] = guard_of(b.nodes[t]);
    }

    for (int t = 0; t < n; ++t) {
        for (int src : b.nodes[t].incoming) {
            if (src == -1) {
                out.edges[pre].push_back({sid(t, advance(0, insets[t])), guards[t]});
                continue;
            }
            for (int c = 0; c <= k; ++c) {
                int nc = advance(c, insets[t]);
                out.edges[sid(src, c)].push_back({sid(t, nc), guards[t]});
            }
        }
    }
    return out;
}

std::string BuchiAutomaton::str() const {
    std::ostringstream os;
    os << "buchi states=" << state_count() << " atoms=[";
    for (size_t i = 0; i < atoms.size(); ++i) os << (i ? ", " : "") << atoms[i].str();
    os << "] init=[";
    for (size_t i = 0; i < initial.size(); ++i) os << (i ? "," : "") << initial[i];
    os << "]\n";
    for (int s = 0; s < state_count(); ++s) {
        os << "  " << s << (accepting[s] ? "*" : " ") << ":";
        for (const Edge& e : edges[s]) {
            os << " ->" << e.target << "[";
            for (size_t i = 0; i < e.guard.size(); ++i)
                os << (e.guard[i] > 0 ? "+" : e.guard[i] < 0 ? "-" : ".");
            os << "]";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace plv
