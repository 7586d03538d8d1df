#include "support/oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace plvtest {

using plv::Formula;
using plv::ModalAtom;

LassoOracle::LassoOracle(const Formula& f) {
    atoms_ = plv::collect_atoms(f);
    root_ = intern(f);
    if (nodes_.size() > 64) throw std::runtime_error("LassoOracle: formula too large");
}

int LassoOracle::intern(const Formula& f) {
    for (size_t i = 0; i < formulas_.size(); ++i)
        if (formulas_[i] == f) return static_cast<int>(i);
    Node n;
    n.kind = f.kind();
    switch (f.kind()) {
        case Formula::Kind::True:
        case Formula::Kind::False:
            break;
        case Formula::Kind::Atom: {
            auto it = std::find(atoms_.begin(), atoms_.end(), f.modal_atom());
            n.atom = static_cast<int>(it - atoms_.begin());
            break;
        }
        case Formula::Kind::Not:
        case Formula::Kind::Always:
        case Formula::Kind::Eventually:
            n.lhs = intern(f.lhs());
            break;
        default:
            n.lhs = intern(f.lhs());
            n.rhs = intern(f.rhs());
            break;
    }
    formulas_.push_back(f);
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
}

bool LassoOracle::holds(const uint32_t* letters, int n, int split) const {
    auto next = [&](int i) { return i + 1 < n ? i + 1 : split; };
    const uint32_t full = (1u << n) - 1;

    uint32_t val[64];
    auto get = [&](int node, int pos) -> bool { return (val[node] >> pos) & 1; };

    // Least fixpoint of v[i] = base[i] | (cond[i] & v[next(i)]).
    auto lfp = [&](uint32_t base, auto cond_at) {
        uint32_t v = base;
        for (int pass = 0; pass <= n; ++pass) {
            uint32_t before = v;
            for (int i = n - 1; i >= 0; --i)
                if (!((v >> i) & 1) && cond_at(i) && ((v >> next(i)) & 1)) v |= 1u << i;
            if (v == before) break;
        }
        return v;
    };
    // Greatest fixpoint of v[i] = need[i] & (stop[i] | v[next(i)]).
    auto gfp = [&](auto need_at, auto stop_at) {
        uint32_t v = full;
        for (int pass = 0; pass <= n; ++pass) {
            uint32_t before = v;
            for (int i = n - 1; i >= 0; --i) {
                bool b = need_at(i) && (stop_at(i) || ((v >> next(i)) & 1));
                if (b)
                    v |= 1u << i;
                else
                    v &= ~(1u << i);
            }
            if (v == before) break;
        }
        return v;
    };

    for (size_t idx = 0; idx < nodes_.size(); ++idx) {
        const Node& nd = nodes_[idx];
        uint32_t v = 0;
        switch (nd.kind) {
            case Formula::Kind::True: v = full; break;
            case Formula::Kind::False: v = 0; break;
            case Formula::Kind::Atom:
                for (int i = 0; i < n; ++i)
                    if ((letters[i] >> nd.atom) & 1) v |= 1u << i;
                break;
            case Formula::Kind::Not: v = ~val[nd.lhs] & full; break;
            case Formula::Kind::And: v = val[nd.lhs] & val[nd.rhs]; break;
            case Formula::Kind::Or: v = val[nd.lhs] | val[nd.rhs]; break;
            case Formula::Kind::Implies: v = (~val[nd.lhs] | val[nd.rhs]) & full; break;
            case Formula::Kind::Always:
                v = gfp([&](int i) { return get(nd.lhs, i); }, [](int) { return false; });
                break;
            case Formula::Kind::Eventually:
                v = lfp(val[nd.lhs], [](int) { return true; });
                break;
            case Formula::Kind::Until:
                v = lfp(val[nd.rhs], [&](int i) { return get(nd.lhs, i); });
                break;
            case Formula::Kind::Release:
                v = gfp([&](int i) { return get(nd.rhs, i); }, [&](int i) { return get(nd.lhs, i); });
                break;
            case Formula::Kind::WeakUntil: {
                uint32_t until = lfp(val[nd.rhs], [&](int i) { return get(nd.lhs, i); });
                uint32_t always = gfp([&](int i) { return get(nd.lhs, i); }, [](int) { return false; });
                v = until | always;
                break;
            }
        }
        val[idx] = v;
    }
    return get(root_, 0);
}

BuchiMatcher::BuchiMatcher(const plv::BuchiAutomaton& a,
                           const std::vector<ModalAtom>& atom_order) {
    nstates_ = a.state_count();
    if (nstates_ > kMaxStates) throw std::runtime_error("BuchiMatcher: more than 32 states");
    k_ = atom_order.size();
    if (k_ > 20) throw std::runtime_error("BuchiMatcher: too many atoms");

    std::vector<int> remap(a.atoms.size(), -1);
    for (size_t i = 0; i < a.atoms.size(); ++i) {
        auto it = std::find(atom_order.begin(), atom_order.end(), a.atoms[i]);
        if (it == atom_order.end())
            throw std::runtime_error("BuchiMatcher: atom missing from order");
        remap[i] = static_cast<int>(it - atom_order.begin());
    }

    for (int q : a.initial) initial_ |= 1u << q;
    for (int q = 0; q < nstates_; ++q)
        if (a.accepting[q]) accepting_ |= 1u << q;

    int letters = 1 << k_;
    succ_.assign(letters, std::vector<uint32_t>(nstates_, 0));
    for (int letter = 0; letter < letters; ++letter) {
        std::vector<bool> valuation(a.atoms.size());
        for (size_t i = 0; i < a.atoms.size(); ++i)
            valuation[i] = (letter >> remap[i]) & 1;
        for (int q = 0; q < nstates_; ++q)
            for (const auto& e : a.edges[q])
                if (plv::BuchiAutomaton::guard_satisfied(e.guard, valuation))
                    succ_[letter][q] |= 1u << e.target;
    }
}

namespace {
template <typename F>
inline void for_bits(uint32_t mask, F&& f) {
    while (mask) {
        int b = __builtin_ctz(mask);
        mask &= mask - 1;
        f(b);
    }
}
}  // namespace

uint32_t BuchiMatcher::step_set(uint32_t set, uint32_t letter) const {
    uint32_t out = 0;
    const auto& step = succ_[letter];
    for_bits(set, [&](int q) { out |= step[q]; });
    return out;
}

void BuchiMatcher::rel_identity(Rel& r) const {
    for (int q = 0; q < nstates_; ++q) {
        r.all[q] = 1u << q;
        r.acc[q] = 0;
    }
}

void BuchiMatcher::rel_step(const Rel& in, uint32_t letter, Rel& out) const {
    const auto& step = succ_[letter];
    for (int q = 0; q < nstates_; ++q) {
        uint32_t nall = 0, nacc = 0;
        for_bits(in.all[q], [&](int r) { nall |= step[r]; });
        for_bits(in.acc[q], [&](int r) { nacc |= step[r]; });
        out.all[q] = nall;
        out.acc[q] = nacc | (nall & accepting_);
    }
}

bool BuchiMatcher::rel_accepts(uint32_t reach, const Rel& r) const {
    // Close the reach set under whole-cycle passes.
    uint32_t S = reach;
    while (true) {
        uint32_t grown = S;
        for_bits(S, [&](int q) { grown |= r.all[q]; });
        if (grown == S) break;
        S = grown;
    }
    bool ok = false;
    for_bits(S, [&](int q) {
        if (ok) return;
        // closure of {q} under passes, then one accepting pass, then closure
        uint32_t from = 1u << q;
        while (true) {
            uint32_t grown = from;
            for_bits(from, [&](int x) { grown |= r.all[x]; });
            if (grown == from) break;
            from = grown;
        }
        uint32_t accout = 0;
        for_bits(from, [&](int x) { accout |= r.acc[x]; });
        uint32_t closure = accout;
        while (true) {
            uint32_t grown = closure;
            for_bits(closure, [&](int x) { grown |= r.all[x]; });
            if (grown == closure) break;
            closure = grown;
        }
        if ((closure >> q) & 1) ok = true;
    });
    return ok;
}

bool BuchiMatcher::accepts(const std::vector<uint32_t>& letters, int split) const {
    uint32_t cur = initial_;
    for (int i = 0; i < split; ++i) {
        cur = step_set(cur, letters[i]);
        if (!cur) return false;
    }
    Rel rel, tmp;
    rel_identity(rel);
    for (size_t i = split; i < letters.size(); ++i) {
        rel_step(rel, letters[i], tmp);
        rel = tmp;
    }
    return rel_accepts(cur, rel);
}

AgreementResult check_lasso_agreement(const Formula& f, int max_total) {
    LassoOracle oracle(f);
    const auto& atoms = oracle.atoms();
    plv::BuchiAutomaton pos = plv::ltl_to_buchi(f);
    plv::BuchiAutomaton neg = plv::ltl_to_buchi(Formula::negation(f));
    BuchiMatcher mpos(pos, atoms);
    BuchiMatcher mneg(neg, atoms);

    const int letters = 1 << static_cast<int>(atoms.size());
    AgreementResult out;

    uint32_t word[8] = {0};

    // Stacks shared across the enumeration: prefix reach sets and cycle
    // relations for both automata.
    uint32_t prepos[8], preneg[8];
    BuchiMatcher::Rel relpos[8], relneg[8];
    prepos[0] = mpos.initial_mask();
    preneg[0] = mneg.initial_mask();

    auto record = [&](int plen, int total) {
        bool sem = oracle.holds(word, total, plen);
        bool ap = mpos.rel_accepts(prepos[plen], relpos[total - plen]);
        bool an = mneg.rel_accepts(preneg[plen], relneg[total - plen]);
        ++out.lassos;
        if (ap != sem || an == sem) {
            if (out.mismatches == 0) {
                out.first_bad.assign(word, word + total);
                out.first_bad_split = plen;
            }
            ++out.mismatches;
        }
    };

    // Depth-first over cycle letters under a fixed prefix length.
    auto cycles = [&](auto&& self, int plen, int clen) -> void {
        if (clen > 0) record(plen, plen + clen);
        if (plen + clen == max_total) return;
        for (int a = 0; a < letters; ++a) {
            word[plen + clen] = static_cast<uint32_t>(a);
            mpos.rel_step(relpos[clen], a, relpos[clen + 1]);
            mneg.rel_step(relneg[clen], a, relneg[clen + 1]);
            self(self, plen, clen + 1);
        }
    };

    auto prefixes = [&](auto&& self, int plen) -> void {
        mpos.rel_identity(relpos[0]);
        mneg.rel_identity(relneg[0]);
        cycles(cycles, plen, 0);
        if (plen == max_total - 1) return;
        for (int a = 0; a < letters; ++a) {
            word[plen] = static_cast<uint32_t>(a);
            prepos[plen + 1] = mpos.step_set(prepos[plen], a);
            preneg[plen + 1] = mneg.step_set(preneg[plen], a);
            self(self, plen + 1);
        }
    };

    prefixes(prefixes, 0);
    return out;
}

}  // namespace plvtest

#include <deque>
#include <functional>

#include "plv/checker.hpp"

namespace plvtest {

bool brute_accepting(const plv::ProductGraph& p) {
    size_t n = p.size();
    std::vector<char> reach(n, 0);
    std::deque<int> queue;
    for (int i : p.initial) {
        if (!reach[i]) {
            reach[i] = 1;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (auto& [j, t] : p.adj[s]) {
            (void)j;
            if (!reach[t]) {
                reach[t] = 1;
                queue.push_back(t);
            }
        }
    }
    for (size_t a = 0; a < n; ++a) {
        if (!reach[a] || !p.accepting[a]) continue;
        // can a reach itself through at least one edge?
        std::vector<char> seen(n, 0);
        std::deque<int> q2;
        for (auto& [j, t] : p.adj[a]) {
            (void)j;
            if (t == static_cast<int>(a)) return true;
            if (!seen[t]) {
                seen[t] = 1;
                q2.push_back(t);
            }
        }
        while (!q2.empty()) {
            int s = q2.front();
            q2.pop_front();
            for (auto& [j, t] : p.adj[s]) {
                (void)j;
                if (t == static_cast<int>(a)) return true;
                if (!seen[t]) {
                    seen[t] = 1;
                    q2.push_back(t);
                }
            }
        }
    }
    return false;
}

bool brute_fair_accepting(const plv::ProductGraph& p, const plv::SystemGraph& g,
                          const plv::ComposedSystem& sys) {
    size_t n = p.size();
    if (n > 20) throw std::runtime_error("brute_fair_accepting: product too large");
    std::vector<char> reach(n, 0);
    std::deque<int> queue;
    for (int i : p.initial) {
        reach[i] = 1;
        queue.push_back(i);
    }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (auto& [j, t] : p.adj[s]) {
            (void)j;
            if (!reach[t]) {
                reach[t] = 1;
                queue.push_back(t);
            }
        }
    }
    auto obls = sys.obligations();
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool ok = true;
        bool any_acc = false;
        // membership, reachability, acceptance
        for (size_t v = 0; v < n && ok; ++v) {
            if (!((mask >> v) & 1)) continue;
            if (!reach[v]) ok = false;
            if (p.accepting[v]) any_acc = true;
        }
        if (!ok || !any_acc) continue;
        // strong connectivity inside the subset (with at least one edge)
        bool has_edge = false;
        for (size_t v = 0; v < n && ok; ++v) {
            if (!((mask >> v) & 1)) continue;
            std::vector<char> seen(n, 0);
            std::deque<int> q2{static_cast<int>(v)};
            seen[v] = 1;
            while (!q2.empty()) {
                int s = q2.front();
                q2.pop_front();
                for (auto& [j, t] : p.adj[s]) {
                    (void)j;
                    if (!((mask >> t) & 1)) continue;
                    has_edge = true;
                    if (!seen[t]) {
                        seen[t] = 1;
                        q2.push_back(t);
                    }
                }
            }
            for (size_t w = 0; w < n; ++w)
                if (((mask >> w) & 1) && !seen[w] && w != v) ok = false;
        }
        if (!ok || !has_edge) continue;
        // single-node subsets need a self-loop
        int members = __builtin_popcount(mask);
        if (members == 1) {
            int v = __builtin_ctz(mask);
            bool self = false;
            for (auto& [j, t] : p.adj[v]) {
                (void)j;
                if (t == v) self = true;
            }
            if (!self) continue;
        }
        // fairness feasibility
        bool fair = true;
        for (const auto& o : obls) {
            bool disabled = false, discharged = false;
            for (size_t v = 0; v < n && !disabled && !discharged; ++v) {
                if (!((mask >> v) & 1)) continue;
                int sid = p.nodes[v].first;
                if (!sys.obligation_enabled(o, g.states[sid])) {
                    disabled = true;
                    break;
                }
                for (auto& [j, t] : p.adj[v]) {
                    if (!((mask >> t) & 1)) continue;
                    if (sys.label_discharges(o, g.adj[sid][j].first)) {
                        discharged = true;
                        break;
                    }
                }
            }
            if (!disabled && !discharged) fair = false;
        }
        if (fair) return true;
    }
    return false;
}

plv::AgentProgram delete_guard(
    plv::AgentProgram program,
    const std::function<bool(const plv::Plan&)>& plan_pred, const std::string& functor) {
    for (plv::Plan& plan : program.plans) {
        if (!plan_pred(plan)) continue;
        for (size_t i = 0; i < plan.guard.size(); ++i) {
            if (plan.guard[i].positive &&
                plan.guard[i].mod == plv::GuardLiteral::Mod::Belief &&
                plan.guard[i].pattern.functor() == functor) {
                plan.guard.erase(plan.guard.begin() + static_cast<long>(i));
                return program;
            }
        }
    }
    throw std::runtime_error("delete_guard: no matching guard found");
}

}  // namespace plvtest
