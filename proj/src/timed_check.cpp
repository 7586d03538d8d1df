#include "plv/timed_check.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace plv {

namespace {

struct ConfigHash {
    size_t operator()(const TimedConfig& c) const {
        size_t h = 1469598103934665603ull;
        for (int32_t v : c.data) {
            h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace

TimedGraph timed_explore_serial(const NetSemantics& sem, uint64_t max_states) {
    TimedGraph g;
    std::unordered_map<TimedConfig, int, ConfigHash> index;
    g.configs.push_back(sem.initial());
    index[g.configs[0]] = 0;
    g.adj.emplace_back();
    g.parent.push_back(-1);
    g.via.emplace_back();
    for (size_t i = 0; i < g.configs.size(); ++i) {
        for (auto& [label, t] : sem.successors(g.configs[i])) {
            auto it = index.find(t);
            int tid;
            if (it == index.end()) {
                if (g.configs.size() + 1 > max_states)
                    throw BoundError("timed state bound exceeded (" +
                                     std::to_string(max_states) + ")");
                tid = static_cast<int>(g.configs.size());
                index[t] = tid;
                g.configs.push_back(t);
                g.adj.emplace_back();
                g.parent.push_back(static_cast<int>(i));
                g.via.push_back(label);
            } else {
                tid = it->second;
            }
            g.adj[i].emplace_back(label, tid);
        }
    }
    return g;
}

// Level-synchronous variant; new configurations of a level are sorted before
// ids are assigned, so numbering and BFS tree are worker-count independent.
TimedGraph timed_explore(const NetSemantics& sem, uint64_t max_states, int workers) {
    TimedGraph g;
    std::unordered_map<TimedConfig, int, ConfigHash> index;
    g.configs.push_back(sem.initial());
    index[g.configs[0]] = 0;
    g.adj.emplace_back();
    g.parent.push_back(-1);
    g.via.emplace_back();

    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        size_t fn = frontier.size();
        std::vector<std::vector<std::pair<TimedLabel, TimedConfig>>> expansions(fn);
#ifdef _OPENMP
        if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(dynamic, 16)
#endif
        for (size_t fi = 0; fi < fn; ++fi)
            expansions[fi] = sem.successors(g.configs[frontier[fi]]);

        std::vector<TimedConfig> fresh;
        std::vector<std::pair<int, TimedLabel>> fresh_parent;
        for (size_t fi = 0; fi < fn; ++fi) {
            int src = frontier[fi];
            for (auto& [label, t] : expansions[fi]) {
                auto it = index.find(t);
                int tid;
                if (it == index.end()) {
                    tid = -(static_cast<int>(fresh.size()) + 1);
                    index[t] = tid;
                    fresh.push_back(t);
                    fresh_parent.emplace_back(src, label);
                } else {
                    tid = it->second;
                }
                g.adj[src].emplace_back(label, tid);
            }
        }
        std::vector<size_t> order(fresh.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return fresh[a].data < fresh[b].data; });
        std::vector<int> remap(fresh.size());
        std::vector<int> next;
        for (size_t i = 0; i < order.size(); ++i) {
            size_t slot = order[i];
            if (g.configs.size() + 1 > max_states)
                throw BoundError("timed state bound exceeded (" + std::to_string(max_states) +
                                 ")");
            int id = static_cast<int>(g.configs.size());
            g.configs.push_back(fresh[slot]);
            g.adj.emplace_back();
            g.parent.push_back(fresh_parent[slot].first);
            g.via.push_back(fresh_parent[slot].second);
            index[fresh[slot]] = id;
            remap[slot] = id;
            next.push_back(id);
        }
        for (size_t fi = 0; fi < fn; ++fi) {
            int src = frontier[fi];
            for (auto& [label, tid] : g.adj[src])
                if (tid < 0) tid = remap[static_cast<size_t>(-tid) - 1];
        }
        frontier = std::move(next);
    }
    return g;
}

namespace {

std::vector<std::pair<std::string, std::string>> path_to(const NetSemantics& sem,
                                                         const TimedGraph& g, int target) {
    std::vector<int> nodes;
    for (int v = target; v >= 0; v = g.parent[v]) nodes.push_back(v);
    std::reverse(nodes.begin(), nodes.end());
    std::vector<std::pair<std::string, std::string>> out;
    for (size_t i = 0; i < nodes.size(); ++i) {
        std::string label = i == 0 ? "" : sem.describe(g.via[nodes[i]]);
        out.emplace_back(label, sem.describe(g.configs[nodes[i]]));
    }
    return out;
}

NetSemantics make_semantics(const TimedNet& net, const TimedCheckOptions& opts,
                            const std::vector<const StatePred*>& preds) {
    std::vector<std::vector<int>> extra;
    for (const StatePred* p : preds) p->collect_clock_consts(net, extra);
    return NetSemantics(net, opts.cap_extra, extra);
}

}  // namespace

TimedVerdict check_invariant(const TimedNet& net, const StatePred& p,
                             const TimedCheckOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    NetSemantics sem = make_semantics(net, opts, {&p});
    TimedGraph g = timed_explore(sem, opts.max_states, opts.workers);
    TimedVerdict v;
    v.property = "A[] (" + p.str() + ")";
    v.states = g.size();
    // ids are breadth-first, so the first violation found in id order has a
    // shortest path
    for (size_t i = 0; i < g.size(); ++i) {
        if (!p.eval(sem, g.configs[i])) {
            v.holds = false;
            v.trace = path_to(sem, g, static_cast<int>(i));
            v.witness = g.configs[i];
            break;
        }
    }
    v.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

TimedVerdict check_leadsto(const TimedNet& net, const StatePred& phi, const StatePred& psi,
                           const TimedCheckOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    NetSemantics sem = make_semantics(net, opts, {&phi, &psi});
    TimedGraph g = timed_explore(sem, opts.max_states, opts.workers);
    TimedVerdict v;
    v.property = phi.str() + " --> " + psi.str();
    v.states = g.size();

    std::vector<char> is_psi(g.size()), is_phi(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
        is_psi[i] = psi.eval(sem, g.configs[i]) ? 1 : 0;
        is_phi[i] = phi.eval(sem, g.configs[i]) ? 1 : 0;
    }

    // Region reachable from a phi-configuration without passing psi.
    std::vector<char> avoid(g.size(), 0);
    std::deque<int> queue;
    std::vector<int> apar(g.size(), -2);  // parents within the avoid region
    for (size_t i = 0; i < g.size(); ++i) {
        if (is_phi[i] && !is_psi[i]) {
            if (apar[i] == -2) {
                avoid[i] = 1;
                apar[i] = -1;
                queue.push_back(static_cast<int>(i));
            }
        }
    }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (auto& [label, t] : g.adj[s]) {
            (void)label;
            if (is_psi[t] || apar[t] != -2) continue;
            apar[t] = s;
            avoid[t] = 1;
            queue.push_back(t);
        }
    }

    // Dead end inside the region: a configuration with no successors at all.
    int dead = -1;
    for (size_t i = 0; i < g.size() && dead < 0; ++i)
        if (avoid[i] && g.adj[i].empty()) dead = static_cast<int>(i);

    // Cycle fully inside the region: iterative DFS with colors. The cycle is
    // entry -> ... -> closer -> entry along DFS tree parents.
    int cycle_entry = -1;
    int cycle_closer = -1;
    std::vector<int> cpar(g.size(), -2);
    if (dead < 0) {
        std::vector<char> color(g.size(), 0);  // 0 white, 1 on stack, 2 done
        struct FrameRec {
            int node;
            size_t child = 0;
        };
        for (size_t root = 0; root < g.size() && cycle_entry < 0; ++root) {
            if (!avoid[root] || color[root]) continue;
            std::vector<FrameRec> stack{{static_cast<int>(root), 0}};
            color[root] = 1;
            cpar[root] = -1;
            while (!stack.empty() && cycle_entry < 0) {
                FrameRec& fr = stack.back();
                if (fr.child < g.adj[fr.node].size()) {
                    int t = g.adj[fr.node][fr.child].second;
                    ++fr.child;
                    if (!avoid[t]) continue;
                    if (color[t] == 1) {
                        cycle_entry = t;
                        cycle_closer = fr.node;
                        break;
                    }
                    if (color[t] == 0) {
                        color[t] = 1;
                        cpar[t] = fr.node;
                        stack.push_back({t, 0});
                    }
                    continue;
                }
                color[fr.node] = 2;
                stack.pop_back();
            }
        }
        if (cycle_entry >= 0) {
            std::vector<int> loop;  // closer, ..., entry (walking tree parents)
            for (int cur = cycle_closer; cur != -1; cur = cpar[cur]) {
                loop.push_back(cur);
                if (cur == cycle_entry) break;
            }
            std::reverse(loop.begin(), loop.end());  // entry, ..., closer
            loop.push_back(cycle_entry);             // close the loop
            for (size_t i = 0; i + 1 < loop.size(); ++i) {
                for (auto& [label, t] : g.adj[loop[i]]) {
                    if (t == loop[i + 1]) {
                        v.cycle.emplace_back(sem.describe(label),
                                             sem.describe(g.configs[loop[i + 1]]));
                        break;
                    }
                }
            }
        }
    }

    int bad = dead >= 0 ? dead : cycle_entry;
    if (bad < 0) {
        v.holds = true;
    } else {
        v.holds = false;
        v.deadlock = dead >= 0;
        // path: initial -> (BFS tree) -> some phi anchor -> (avoid region) -> bad
        std::vector<int> region_path;
        for (int s = bad; s >= 0; s = apar[s] == -1 ? -1 : apar[s]) {
            region_path.push_back(s);
            if (apar[s] == -1) break;
        }
        std::reverse(region_path.begin(), region_path.end());
        int anchor = region_path.front();
        v.trace = path_to(sem, g, anchor);
        for (size_t i = 1; i < region_path.size(); ++i) {
            for (auto& [label, t] : g.adj[region_path[i - 1]]) {
                if (t == region_path[i]) {
                    v.trace.emplace_back(sem.describe(label),
                                         sem.describe(g.configs[region_path[i]]));
                    break;
                }
            }
        }
        v.witness = g.configs[bad];
    }
    v.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

TimedVerdict check_property(const TimedNet& net, const TimedProperty& p,
                            const TimedCheckOptions& opts) {
    TimedVerdict v = p.kind == TimedProperty::Kind::Invariant
                         ? check_invariant(net, p.lhs, opts)
                         : check_leadsto(net, p.lhs, p.rhs, opts);
    v.property = p.name + ": " + p.str();
    return v;
}

}  // namespace plv
