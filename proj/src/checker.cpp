#include "plv/checker.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "plv/diagnostics.hpp"

namespace plv {

namespace {

bool agent_can_move(const ComposedSystem& sys, const SystemState& s) {
    StepResult r = step(s.agent, sys.program);
    AgentState cleared = s.agent;
    cleared.last_action.reset();
    return !(r.state == cleared) || r.obs.action.has_value() || r.obs.message.has_value();
}

}  // namespace

SystemGraph explore_serial(const ComposedSystem& sys, uint64_t max_states) {
    SystemGraph g;
    std::unordered_map<std::string, int> index;
    g.states.push_back(sys.initial);
    index[sys.initial.encode()] = 0;
    g.adj.emplace_back();
    g.agent_enabled.push_back(agent_can_move(sys, sys.initial));
    for (size_t i = 0; i < g.states.size(); ++i) {
        auto succ = sys.successors(g.states[i]);
        for (auto& [label, t] : succ) {
            std::string key = t.encode();
            auto it = index.find(key);
            int tid;
            if (it == index.end()) {
                tid = static_cast<int>(g.states.size());
                if (g.states.size() + 1 > max_states)
                    throw BoundError("state bound exceeded (" + std::to_string(max_states) + ")");
                index[key] = tid;
                g.states.push_back(t);
                g.adj.emplace_back();
                g.agent_enabled.push_back(agent_can_move(sys, t));
            } else {
                tid = it->second;
            }
            g.adj[i].emplace_back(label, tid);
        }
    }
    return g;
}

// Level-synchronous frontier expansion. Each frontier slot is expanded
// independently (parallel when OpenMP is enabled); new states found in a
// level are sorted by their canonical encoding before ids are assigned, so
// the numbering is identical for any worker count.
SystemGraph explore(const ComposedSystem& sys, uint64_t max_states, int workers) {
    SystemGraph g;
    std::unordered_map<std::string, int> index;
    g.states.push_back(sys.initial);
    index[sys.initial.encode()] = 0;
    g.adj.emplace_back();
    g.agent_enabled.push_back(agent_can_move(sys, sys.initial));

    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        size_t fn = frontier.size();
        std::vector<std::vector<std::pair<SysLabel, SystemState>>> expansions(fn);

#ifdef _OPENMP
        if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(dynamic, 4)
#endif
        for (size_t fi = 0; fi < fn; ++fi)
            expansions[fi] = sys.successors(g.states[frontier[fi]]);

        // Deterministic merge in frontier order.
        std::vector<int> next;
        std::vector<std::pair<std::string, int>> fresh;  // encode -> id (assigned later)
        std::vector<SystemState> fresh_states;
        for (size_t fi = 0; fi < fn; ++fi) {
            int src = frontier[fi];
            for (auto& [label, t] : expansions[fi]) {
                std::string key = t.encode();
                auto it = index.find(key);
                int tid;
                if (it == index.end()) {
                    tid = -(static_cast<int>(fresh_states.size()) + 1);  // placeholder
                    index[key] = tid;
                    fresh.emplace_back(key, tid);
                    fresh_states.push_back(t);
                } else {
                    tid = it->second;
                }
                g.adj[src].emplace_back(label, tid);
            }
        }
        // Canonical id assignment: sort the level's new states by encoding.
        std::vector<size_t> order(fresh_states.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return fresh[a].first < fresh[b].first;
        });
        std::vector<int> placeholder_to_id(fresh_states.size());
        for (size_t i = 0; i < order.size(); ++i) {
            size_t slot = order[i];
            int id = static_cast<int>(g.states.size());
            if (g.states.size() + 1 > max_states)
                throw BoundError("state bound exceeded (" + std::to_string(max_states) + ")");
            g.states.push_back(fresh_states[slot]);
            g.adj.emplace_back();
            g.agent_enabled.push_back(agent_can_move(sys, g.states.back()));
            index[fresh[slot].first] = id;
            placeholder_to_id[slot] = id;
            next.push_back(id);
        }
        // Patch placeholder targets.
        for (size_t fi = 0; fi < fn; ++fi) {
            int src = frontier[fi];
            for (auto& [label, tid] : g.adj[src])
                if (tid < 0) tid = placeholder_to_id[static_cast<size_t>(-tid) - 1];
        }
        frontier = std::move(next);
    }
    return g;
}

ProductGraph build_product(const SystemGraph& g, const ComposedSystem& sys,
                           const BuchiAutomaton& ba, const std::vector<ModalAtom>& atoms) {
    // Valuations per system state over the formula's atom list.
    size_t na = atoms.size();
    std::vector<std::vector<bool>> val(g.size(), std::vector<bool>(na, false));
    for (size_t s = 0; s < g.size(); ++s)
        for (size_t a = 0; a < na; ++a) val[s][a] = eval_atom(g.states[s], atoms[a], sys);

    // Remap the automaton guards into the formula atom order.
    std::vector<int> remap(ba.atoms.size(), -1);
    for (size_t i = 0; i < ba.atoms.size(); ++i) {
        for (size_t j = 0; j < atoms.size(); ++j)
            if (atoms[j] == ba.atoms[i]) remap[i] = static_cast<int>(j);
        if (remap[i] < 0) throw ConfigError("product: automaton atom missing from formula");
    }
    auto edge_ok = [&](const BuchiAutomaton::Edge& e, const std::vector<bool>& v) {
        for (size_t i = 0; i < e.guard.size(); ++i) {
            if (e.guard[i] > 0 && !v[remap[i]]) return false;
            if (e.guard[i] < 0 && v[remap[i]]) return false;
        }
        return true;
    };

    ProductGraph p;
    std::unordered_map<int64_t, int> index;
    auto key_of = [&](int s, int q) { return static_cast<int64_t>(s) * ba.state_count() + q; };
    auto intern = [&](int s, int q) {
        int64_t key = key_of(s, q);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(p.nodes.size());
        index[key] = id;
        p.nodes.emplace_back(s, q);
        p.adj.emplace_back();
        p.accepting.push_back(ba.accepting[q]);
        return id;
    };

    // Initial product nodes: the automaton consumes the initial state's
    // valuation from its pre-initial states.
    std::vector<std::pair<int, int>> inits;
    for (int q0 : ba.initial)
        for (const auto& e : ba.edges[q0])
            if (edge_ok(e, val[0])) inits.emplace_back(0, e.target);
    std::sort(inits.begin(), inits.end());
    inits.erase(std::unique(inits.begin(), inits.end()), inits.end());
    for (auto& [s, q] : inits) p.initial.push_back(intern(s, q));

    for (size_t i = 0; i < p.nodes.size(); ++i) {
        auto [s, q] = p.nodes[i];
        for (size_t j = 0; j < g.adj[s].size(); ++j) {
            int t = g.adj[s][j].second;
            for (const auto& e : ba.edges[q]) {
                if (!edge_ok(e, val[t])) continue;
                int pid = intern(t, e.target);
                p.adj[i].emplace_back(static_cast<int>(j), pid);
            }
        }
    }
    return p;
}

bool ndfs_accepting(const ProductGraph& p) {
    // Iterative nested DFS: the blue search orders states; the red search
    // from each accepting postorder state looks for a cycle back onto it.
    size_t n = p.size();
    std::vector<uint8_t> blue(n, 0), red(n, 0);  // 0 unseen, 1 on stack, 2 done
    struct FrameRec {
        int node;
        size_t next_child = 0;
    };

    auto red_search = [&](int seed) {
        std::vector<FrameRec> stack{{seed, 0}};
        while (!stack.empty()) {
            FrameRec& fr = stack.back();
            if (fr.next_child == p.adj[fr.node].size()) {
                stack.pop_back();
                continue;
            }
            int t = p.adj[fr.node][fr.next_child].second;
            ++fr.next_child;
            if (t == seed) return true;  // lasso closes on the accepting seed
            if (blue[t] == 1) return true;  // hits the blue stack above the seed
            if (!red[t]) {
                red[t] = 1;
                stack.push_back({t, 0});
            }
        }
        return false;
    };

    for (int init : p.initial) {
        if (blue[init]) continue;
        std::vector<FrameRec> stack{{init, 0}};
        blue[init] = 1;
        while (!stack.empty()) {
            FrameRec& fr = stack.back();
            if (fr.next_child < p.adj[fr.node].size()) {
                int t = p.adj[fr.node][fr.next_child].second;
                ++fr.next_child;
                if (!blue[t]) {
                    blue[t] = 1;
                    stack.push_back({t, 0});
                }
                continue;
            }
            int node = fr.node;
            stack.pop_back();
            if (p.accepting[node]) {
                if (red_search(node)) return true;
            }
            blue[node] = 2;
        }
    }
    return false;
}

namespace {

struct SccResult {
    std::vector<int> comp;  // node -> component id, -1 if unreachable
    int count = 0;
    std::vector<bool> nontrivial;  // has an internal cycle
};

SccResult tarjan(const ProductGraph& p) {
    size_t n = p.size();
    SccResult res;
    res.comp.assign(n, -1);
    std::vector<int> low(n, 0), num(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int counter = 0;

    struct FrameRec {
        int node;
        size_t child = 0;
    };
    for (int root : p.initial) {
        if (num[root] >= 0) continue;
        std::vector<FrameRec> call{{root, 0}};
        num[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            FrameRec& fr = call.back();
            if (fr.child < p.adj[fr.node].size()) {
                int t = p.adj[fr.node][fr.child].second;
                ++fr.child;
                if (num[t] < 0) {
                    num[t] = low[t] = counter++;
                    stack.push_back(t);
                    on_stack[t] = true;
                    call.push_back({t, 0});
                } else if (on_stack[t]) {
                    low[fr.node] = std::min(low[fr.node], num[t]);
                }
                continue;
            }
            int node = fr.node;
            call.pop_back();
            if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[node]);
            if (low[node] == num[node]) {
                int cid = res.count++;
                while (true) {
                    int v = stack.back();
                    stack.pop_back();
                    on_stack[v] = false;
                    res.comp[v] = cid;
                    if (v == node) break;
                }
            }
        }
    }
    res.nontrivial.assign(res.count, false);
    std::vector<int> sizes(res.count, 0);
    for (size_t v = 0; v < n; ++v)
        if (res.comp[v] >= 0) ++sizes[res.comp[v]];
    for (size_t v = 0; v < n; ++v) {
        if (res.comp[v] < 0) continue;
        for (auto& [j, t] : p.adj[v]) {
            if (res.comp[t] == res.comp[v] && (sizes[res.comp[v]] > 1 || t == static_cast<int>(v)))
                res.nontrivial[res.comp[v]] = true;
        }
    }
    return res;
}

struct Feasible {
    bool ok = false;
    int scc = -1;
    int anchor = -1;  // accepting node inside the SCC with minimal id
};

// A fair accepting lasso exists iff some reachable SCC has a cycle, contains
// an accepting node, and every obligation is either disabled somewhere in it
// or discharged by some internal edge.
Feasible fair_feasible(const ProductGraph& p, const SystemGraph& g, const ComposedSystem& sys,
                       const SccResult& scc, bool fair) {
    std::vector<ComposedSystem::Obligation> obls;
    if (fair) obls = sys.obligations();

    std::vector<int> anchor(scc.count, -1);
    for (size_t v = 0; v < p.size(); ++v) {
        int c = scc.comp[v];
        if (c < 0 || !p.accepting[v]) continue;
        if (anchor[c] < 0) anchor[c] = static_cast<int>(v);
    }

    // Precompute obligation enabledness per system state (lazily cached).
    std::vector<std::vector<int8_t>> enabled(obls.size(),
                                             std::vector<int8_t>(g.size(), -1));
    auto is_enabled = [&](size_t oi, int sid) {
        int8_t& cell = enabled[oi][sid];
        if (cell < 0) {
            if (obls[oi].kind == ComposedSystem::Obligation::Kind::AgentProgress)
                cell = g.agent_enabled[sid] ? 1 : 0;
            else
                cell = sys.obligation_enabled(obls[oi], g.states[sid]) ? 1 : 0;
        }
        return cell == 1;
    };

    for (int c = 0; c < scc.count; ++c) {
        if (!scc.nontrivial[c] || anchor[c] < 0) continue;
        bool all_ok = true;
        for (size_t oi = 0; oi < obls.size() && all_ok; ++oi) {
            bool disabled_somewhere = false;
            bool discharged = false;
            for (size_t v = 0; v < p.size() && !disabled_somewhere && !discharged; ++v) {
                if (scc.comp[v] != c) continue;
                int sid = p.nodes[v].first;
                if (!is_enabled(oi, sid)) {
                    disabled_somewhere = true;
                    break;
                }
                for (auto& [j, t] : p.adj[v]) {
                    if (scc.comp[t] != c) continue;
                    const SysLabel& label = g.adj[sid][j].first;
                    if (sys.label_discharges(obls[oi], label)) {
                        discharged = true;
                        break;
                    }
                }
            }
            all_ok = disabled_somewhere || discharged;
        }
        if (all_ok) return {true, c, anchor[c]};
    }
    return {};
}

}  // namespace

bool scc_accepting(const ProductGraph& p, const SystemGraph& g, const ComposedSystem& sys,
                   bool fair) {
    SccResult scc = tarjan(p);
    return fair_feasible(p, g, sys, scc, fair).ok;
}

namespace {

// Shortest path in the product between two nodes, optionally restricted to
// one SCC; ties broken by smaller node id (breadth-first with ordered
// expansion). Returns the edge sequence as (source node, child index).
std::vector<std::pair<int, int>> bfs_path(const ProductGraph& p, const std::vector<int>& comp,
                                          int restrict_comp, int from,
                                          const std::vector<int>& targets) {
    std::vector<int> parent(p.size(), -2), via(p.size(), -1);
    std::deque<int> queue;
    parent[from] = -1;
    queue.push_back(from);
    std::vector<bool> is_target(p.size(), false);
    for (int t : targets) is_target[t] = true;
    int hit = -1;
    if (is_target[from]) hit = from;
    while (!queue.empty() && hit < 0) {
        int v = queue.front();
        queue.pop_front();
        for (size_t j = 0; j < p.adj[v].size(); ++j) {
            int t = p.adj[v][j].second;
            if (restrict_comp >= 0 && comp[t] != restrict_comp) continue;
            if (parent[t] != -2) continue;
            parent[t] = v;
            via[t] = static_cast<int>(j);
            if (is_target[t]) {
                hit = t;
                break;
            }
            queue.push_back(t);
        }
    }
    std::vector<std::pair<int, int>> edges;
    if (hit < 0) return edges;
    for (int v = hit; parent[v] >= 0; v = parent[v]) edges.emplace_back(parent[v], via[v]);
    std::reverse(edges.begin(), edges.end());
    return edges;
}

// First edge inside the SCC from `from` (by node order) that discharges the
// obligation; (-1,-1) if none.
std::pair<int, int> find_discharging_edge(const ProductGraph& p, const SystemGraph& g,
                                          const ComposedSystem& sys,
                                          const ComposedSystem::Obligation& o,
                                          const std::vector<int>& comp, int c) {
    for (size_t v = 0; v < p.size(); ++v) {
        if (comp[v] != c) continue;
        int sid = p.nodes[v].first;
        for (size_t j = 0; j < p.adj[v].size(); ++j) {
            if (comp[p.adj[v][j].second] != c) continue;
            if (sys.label_discharges(o, g.adj[sid][j].first))
                return {static_cast<int>(v), static_cast<int>(j)};
        }
    }
    return {-1, -1};
}

}  // namespace

std::string Counterexample::render(const std::vector<ModalAtom>& atoms) const {
    std::ostringstream os;
    auto row = [&](const std::vector<bool>& v) {
        std::string s;
        for (size_t i = 0; i < atoms.size(); ++i) {
            if (!v[i]) continue;
            if (!s.empty()) s += ", ";
            s += atoms[i].str();
        }
        return s.empty() ? std::string("(none)") : s;
    };
    os << "initial: " << row(initial_atoms) << "\n";
    for (const CexStep& st : prefix)
        os << "  " << st.label.str() << "\n    => " << row(st.atoms) << "\n";
    os << "cycle:\n";
    for (const CexStep& st : cycle)
        os << "  " << st.label.str() << "\n    => " << row(st.atoms) << "\n";
    return os.str();
}

Verdict check(const ComposedSystem& sys, const Formula& f, const CheckOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    v.formula = f.str();

    auto agents = agents_of(f);
    if (agents.size() > 1) {
        std::string who;
        for (const auto& a : agents) who += (who.empty() ? "" : ", ") + a;
        throw ConfigError(
            "property names more than one agent (" + who +
            "); agent properties are local to a single agent — split the formula per agent");
    }
    if (agents.size() == 1 && agents[0] != sys.program.name)
        throw ConfigError("property names agent '" + agents[0] + "' but the checked agent is '" +
                          sys.program.name + "'");

    SystemGraph g = explore(sys, opts.max_states, opts.workers);
    v.system_states = g.size();

    std::vector<ModalAtom> atoms = collect_atoms(f);
    BuchiAutomaton ba = ltl_to_buchi(Formula::negation(f), opts.buchi_node_bound);
    ProductGraph p = build_product(g, sys, ba, atoms);
    v.product_states = p.size();

    SccResult scc = tarjan(p);
    Feasible feas = fair_feasible(p, g, sys, scc, opts.fair);
    if (!feas.ok) {
        v.holds = true;
        v.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t0)
                        .count();
        return v;
    }

    v.holds = false;

    // Canonical counterexample. Prefix: shortest path from an initial node
    // to the anchor. Cycle: anchor -> each obligation witness -> anchor,
    // all via shortest in-SCC paths.
    int anchor = feas.anchor;
    std::vector<std::pair<int, int>> prefix_edges;
    {
        size_t best_len = SIZE_MAX;
        for (int init : p.initial) {
            if (init == anchor) {
                prefix_edges.clear();
                break;
            }
            auto path = bfs_path(p, scc.comp, -1, init, {anchor});
            if (path.empty()) continue;  // anchor unreachable from this init
            if (path.size() < best_len) {
                best_len = path.size();
                prefix_edges = path;
            }
        }
    }

    std::vector<std::pair<int, int>> cycle_edges;
    {
        std::vector<ComposedSystem::Obligation> obls;
        if (opts.fair) obls = sys.obligations();
        int cur = anchor;
        auto extend_to = [&](int target) {
            if (cur == target) return;
            auto path = bfs_path(p, scc.comp, feas.scc, cur, {target});
            for (auto& e : path) cycle_edges.push_back(e);
            cur = target;
        };
        for (const auto& o : obls) {
            // Skip obligations already broken somewhere in the SCC by a
            // disabled state: route the cycle through that state.
            int disabled_node = -1;
            for (size_t vtx = 0; vtx < p.size(); ++vtx) {
                if (scc.comp[vtx] != feas.scc) continue;
                int sid = p.nodes[vtx].first;
                bool en = o.kind == ComposedSystem::Obligation::Kind::AgentProgress
                              ? g.agent_enabled[sid]
                              : sys.obligation_enabled(o, g.states[sid]);
                if (!en) {
                    disabled_node = static_cast<int>(vtx);
                    break;
                }
            }
            if (disabled_node >= 0) {
                extend_to(disabled_node);
                continue;
            }
            auto [src, j] = find_discharging_edge(p, g, sys, o, scc.comp, feas.scc);
            if (src < 0) continue;  // cannot happen for a feasible SCC
            extend_to(src);
            cycle_edges.emplace_back(src, j);
            cur = p.adj[src][j].second;
        }
        extend_to(anchor);
        if (cycle_edges.empty()) {
            // Need at least one transition; a nontrivial SCC guarantees a
            // cycle through the anchor.
            for (size_t j = 0; j < p.adj[anchor].size(); ++j) {
                int t = p.adj[anchor][j].second;
                if (scc.comp[t] != feas.scc) continue;
                cycle_edges.emplace_back(anchor, static_cast<int>(j));
                cur = t;
                extend_to(anchor);
                break;
            }
        }
    }

    // Materialize the counterexample with valuations and encodings.
    Counterexample cex;
    auto valuation = [&](int sid) {
        std::vector<bool> row(atoms.size());
        for (size_t a = 0; a < atoms.size(); ++a)
            row[a] = eval_atom(g.states[sid], atoms[a], sys);
        return row;
    };
    cex.initial_atoms = valuation(0);
    cex.initial_encode = g.states[0].encode();
    auto emit = [&](const std::vector<std::pair<int, int>>& edges, std::vector<CexStep>& outv) {
        for (auto& [node, j] : edges) {
            int sid = p.nodes[node].first;
            int tnode = p.adj[node][j].second;
            int tsid = p.nodes[tnode].first;
            int sys_edge = p.adj[node][j].first;
            CexStep stp;
            stp.label = g.adj[sid][sys_edge].first;
            stp.atoms = valuation(tsid);
            stp.state_encode = g.states[tsid].encode();
            outv.push_back(std::move(stp));
        }
    };
    emit(prefix_edges, cex.prefix);
    emit(cycle_edges, cex.cycle);
    v.counterexample = std::move(cex);
    v.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

bool replay(const ComposedSystem& sys, const Formula& f, const Counterexample& cex) {
    std::vector<ModalAtom> atoms = collect_atoms(f);
    SystemState cur = sys.initial;
    auto valuation = [&](const SystemState& s) {
        std::vector<bool> row(atoms.size());
        for (size_t a = 0; a < atoms.size(); ++a) row[a] = eval_atom(s, atoms[a], sys);
        return row;
    };
    if (cur.encode() != cex.initial_encode) return false;
    if (valuation(cur) != cex.initial_atoms) return false;
    for (const CexStep& stp : cex.prefix) {
        auto next = sys.apply(cur, stp.label);
        if (!next) return false;
        cur = *next;
        if (cur.encode() != stp.state_encode) return false;
        if (valuation(cur) != stp.atoms) return false;
    }
    std::string head = cur.encode();
    for (const CexStep& stp : cex.cycle) {
        auto next = sys.apply(cur, stp.label);
        if (!next) return false;
        cur = *next;
        if (cur.encode() != stp.state_encode) return false;
        if (valuation(cur) != stp.atoms) return false;
    }
    return cur.encode() == head;
}

}  // namespace plv
