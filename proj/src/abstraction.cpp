#include "plv/abstraction.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

namespace plv {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

FiniteAutomaton FiniteAutomaton::determinized() const {
    // adjacency split into internal and labeled
    size_t n = states.size();
    std::vector<std::vector<int>> eps(n);
    std::vector<std::vector<std::pair<std::string, int>>> lab(n);
    for (const Edge& e : edges) {
        if (e.label.empty())
            eps[e.src].push_back(e.dst);
        else
            lab[e.src].emplace_back(e.label, e.dst);
    }
    auto closure = [&](std::vector<int> set) {
        std::deque<int> queue(set.begin(), set.end());
        std::vector<char> seen(n, 0);
        for (int s : set) seen[s] = 1;
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            for (int t : eps[s]) {
                if (!seen[t]) {
                    seen[t] = 1;
                    set.push_back(t);
                    queue.push_back(t);
                }
            }
        }
        return sorted_unique(std::move(set));
    };

    FiniteAutomaton out;
    std::map<std::vector<int>, int> index;
    std::vector<std::vector<int>> subsets;
    auto intern = [&](std::vector<int> subset) {
        auto it = index.find(subset);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(subsets.size());
        index[subset] = id;
        subsets.push_back(subset);
        out.states.push_back("s" + std::to_string(id));
        return id;
    };
    intern(closure({initial}));
    out.initial = 0;
    for (size_t i = 0; i < subsets.size(); ++i) {
        std::map<std::string, std::vector<int>> moves;
        for (int s : subsets[i])
            for (auto& [l, t] : lab[s]) moves[l].push_back(t);
        for (auto& [l, ts] : moves) {
            int target = intern(closure(sorted_unique(ts)));
            out.edges.push_back({static_cast<int>(i), target, l});
        }
    }
    return out;
}

std::set<std::vector<std::string>> FiniteAutomaton::bounded_traces(int depth) const {
    FiniteAutomaton d = determinized();
    size_t n = d.states.size();
    std::vector<std::vector<std::pair<std::string, int>>> adj(n);
    for (const Edge& e : d.edges) adj[e.src].emplace_back(e.label, e.dst);

    std::set<std::vector<std::string>> out;
    std::vector<std::string> cur;
    std::function<void(int, int)> walk = [&](int s, int left) {
        out.insert(cur);
        if (left == 0) return;
        for (auto& [l, t] : adj[s]) {
            cur.push_back(l);
            walk(t, left - 1);
            cur.pop_back();
        }
    };
    walk(d.initial, depth);
    return out;
}

bool FiniteAutomaton::accepts_trace(const std::vector<std::string>& trace) const {
    FiniteAutomaton d = determinized();
    int cur = d.initial;
    for (const std::string& l : trace) {
        int next = -1;
        for (const Edge& e : d.edges)
            if (e.src == cur && e.label == l) {
                next = e.dst;
                break;
            }
        if (next < 0) return false;
        cur = next;
    }
    return true;
}

std::string FiniteAutomaton::serialize() const {
    std::ostringstream os;
    os << "automaton " << states.size() << " " << initial << "\n";
    for (const std::string& s : states) os << "state " << s << "\n";
    for (const Edge& e : edges)
        os << "edge " << e.src << " " << e.dst << " " << (e.label.empty() ? "-" : e.label)
           << "\n";
    return os.str();
}

FiniteAutomaton FiniteAutomaton::deserialize(const std::string& text) {
    FiniteAutomaton fa;
    std::istringstream is(text);
    std::string kind;
    size_t n = 0;
    is >> kind >> n >> fa.initial;
    if (kind != "automaton") throw ConfigError("bad automaton file");
    for (size_t i = 0; i < n; ++i) {
        std::string s, name;
        is >> s >> name;
        fa.states.push_back(name);
    }
    Edge e;
    std::string label;
    while (is >> kind >> e.src >> e.dst >> label) {
        e.label = label == "-" ? "" : label;
        fa.edges.push_back(e);
    }
    return fa;
}

FiniteAutomaton untime(const TimedAutomaton& ta, const std::vector<std::string>& channels) {
    FiniteAutomaton fa;
    for (const TimedLocation& l : ta.locations) fa.states.push_back(l.name);
    fa.initial = ta.initial;
    for (const TimedEdge& e : ta.edges) {
        std::string label;
        if (e.channel >= 0) {
            label = (e.channel < static_cast<int>(channels.size())
                         ? channels[e.channel]
                         : "ch" + std::to_string(e.channel)) +
                    (e.send ? "!" : "?");
        } else {
            label = e.action;
        }
        fa.edges.push_back({e.src, e.dst, label});
    }
    // prune unreachable states
    std::vector<char> seen(fa.states.size(), 0);
    std::deque<int> queue{fa.initial};
    seen[fa.initial] = 1;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const auto& e : fa.edges)
            if (e.src == s && !seen[e.dst]) {
                seen[e.dst] = 1;
                queue.push_back(e.dst);
            }
    }
    std::vector<int> remap(fa.states.size(), -1);
    FiniteAutomaton pruned;
    for (size_t i = 0; i < fa.states.size(); ++i) {
        if (!seen[i]) continue;
        remap[i] = static_cast<int>(pruned.states.size());
        pruned.states.push_back(fa.states[i]);
    }
    pruned.initial = remap[fa.initial];
    for (const auto& e : fa.edges)
        if (seen[e.src] && seen[e.dst]) pruned.edges.push_back({remap[e.src], remap[e.dst], e.label});
    return pruned;
}

namespace {

std::string observable_label(const ComposedSystem& sys, const SysLabel& l) {
    switch (l.kind) {
        case SysLabel::Kind::AgentStep:
            if (l.action) return "act:" + l.action->str();
            if (l.message_content) return "msg:" + l.message_content->str();
            return "";
        case SysLabel::Kind::EnvMove: {
            const EnvEdge& e = sys.envs[l.env_index].edges[l.edge_index];
            if (e.kind == EnvEdge::Kind::Grant) return "grant:" + e.pattern.str();
            if (e.kind == EnvEdge::Kind::Retract) return "retract:" + e.pattern.str();
            return "";
        }
        case SysLabel::Kind::Stutter:
            return "";
    }
    return "";
}

}  // namespace

FiniteAutomaton extract_io(const AgentProgram& program, const std::vector<EnvAutomaton>& envs,
                           const ExtractOptions& opts) {
    ComposedSystem sys = compose(program, envs);
    return extract_io_from_system(sys, opts);
}

FiniteAutomaton extract_io_from_system(const ComposedSystem& sys, const ExtractOptions& opts) {
    // Depth-bounded breadth-first exploration.
    std::map<std::string, int> index;
    std::vector<SystemState> states{sys.initial};
    index[sys.initial.encode()] = 0;
    FiniteAutomaton fa;
    fa.states.push_back("q0");
    fa.initial = 0;

    std::vector<int> frontier{0};
    int depth = 0;
    while (!frontier.empty()) {
        if (depth++ > opts.max_depth)
            throw BoundError("extract_io: depth bound exceeded with work remaining");
        std::vector<int> next;
        for (int s : frontier) {
            for (auto& [label, t] : sys.successors(states[s])) {
                std::string key = t.encode();
                auto it = index.find(key);
                int tid;
                if (it == index.end()) {
                    if (states.size() + 1 > opts.max_states)
                        throw BoundError("extract_io: state bound exceeded");
                    tid = static_cast<int>(states.size());
                    index[key] = tid;
                    states.push_back(t);
                    fa.states.push_back("q" + std::to_string(tid));
                    next.push_back(tid);
                } else {
                    tid = it->second;
                }
                fa.edges.push_back({s, tid, observable_label(sys, label)});
            }
        }
        frontier = std::move(next);
    }
    return fa.determinized();
}

FiniteAutomaton extract_io(const CheckScenario& scenario, const ExtractOptions& opts) {
    ComposedSystem sys = compose(scenario.program, scenario.make_envs(), scenario.extra_beliefs,
                                 scenario.goal_overrides, scenario.replace_goals);
    return extract_io_from_system(sys, opts);
}

TimedAutomaton substitute_agent(const FiniteAutomaton& io, const LabelMap& map,
                                const std::string& name,
                                const std::vector<std::string>& channels) {
    // Map observables to channel events; unmapped observables are internal.
    FiniteAutomaton mapped = io;
    for (auto& e : mapped.edges) {
        if (e.label.empty()) continue;
        auto it = map.to_channel.find(e.label);
        e.label = it == map.to_channel.end() ? "" : it->second;
    }
    FiniteAutomaton det = mapped.determinized();

    TimedAutomaton ta;
    ta.name = name;
    int pt = 0, u = 1;
    ta.clocks = {"process_time", "u"};
    std::map<std::string, int> var_ids;
    for (const auto& [event, updates] : map.updates) {
        (void)event;
        for (const auto& [var, value] : updates) {
            (void)value;
            if (!var_ids.count(var)) {
                var_ids[var] = static_cast<int>(ta.vars.size());
                ta.vars.push_back(var);
                ta.var_init.push_back(0);
            }
        }
    }

    for (const std::string& s : det.states) ta.locations.push_back({s, {}, {}});
    ta.initial = det.initial;

    auto channel_of = [&](const std::string& event) -> std::pair<int, bool> {
        std::string base = event.substr(0, event.size() - 1);
        bool send = event.back() == '!';
        for (size_t i = 0; i < channels.size(); ++i)
            if (channels[i] == base) return {static_cast<int>(i), send};
        throw ConfigError("label map references unknown channel " + base);
    };

    for (const auto& e : det.edges) {
        TimedEdge te;
        te.src = e.src;
        te.dst = e.dst;
        auto [ch, send] = channel_of(e.label);
        te.channel = ch;
        te.send = send;
        te.action = e.label;
        if (auto it = map.resets.find(e.label); it != map.resets.end()) {
            for (const std::string& c : it->second)
                te.resets.push_back(c == "process_time" ? pt : u);
        }
        if (auto it = map.updates.find(e.label); it != map.updates.end()) {
            for (const auto& [var, value] : it->second)
                te.updates.push_back({var_ids[var], false, value});
        }
        ta.edges.push_back(std::move(te));
    }

    // `at` aliases: split each matching edge through a committed location.
    for (const LabelMap::Alias& alias : map.aliases) {
        if (!alias.at_event) continue;
        size_t edge_count = ta.edges.size();
        for (size_t ei = 0; ei < edge_count; ++ei) {
            if (ta.edges[ei].action != alias.at) continue;
            int mid = static_cast<int>(ta.locations.size());
            ta.locations.push_back(
                {name + "_" + alias.name + "_" + std::to_string(mid),
                 {alias.name},
                 {GuardAtom{true, u, CmpOp::Le, 0}}});
            int old_dst = ta.edges[ei].dst;
            ta.edges[ei].dst = mid;
            ta.edges[ei].resets.push_back(u);
            TimedEdge hop;
            hop.src = mid;
            hop.dst = old_dst;
            hop.action = alias.name;
            ta.edges.push_back(std::move(hop));
        }
    }

    // `between` aliases: phase propagation over the final location graph.
    for (const LabelMap::Alias& alias : map.aliases) {
        if (alias.at_event) continue;
        size_t n = ta.locations.size();
        // phase bits: 1 = out, 2 = in
        std::vector<uint8_t> phase(n, 0);
        phase[ta.initial] = 1;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const TimedEdge& e : ta.edges) {
                uint8_t source = phase[e.src];
                if (!source) continue;
                uint8_t target;
                if (alias.after.count(e.action))
                    target = 2;
                else if (alias.before.count(e.action))
                    target = 1;
                else
                    target = source;
                if ((phase[e.dst] | target) != phase[e.dst]) {
                    phase[e.dst] |= target;
                    changed = true;
                }
            }
        }
        for (size_t i = 0; i < n; ++i) {
            if (phase[i] == 3)
                throw ConfigError("alias '" + alias.name + "' is ambiguous at state " +
                                  ta.locations[i].name);
            if (phase[i] == 2) ta.locations[i].aliases.push_back(alias.name);
        }
    }

    return ta;
}

LabelMap follower_label_map(int i, const SpacingConfig& spacing) {
    std::string sfx = "_" + std::to_string(i);
    std::string inc = std::to_string(spacing.increase);
    std::string nrm = std::to_string(spacing.normal);
    LabelMap m;
    m.to_channel = {
        {"msg:join_req(f3, f1)", "join_r" + sfx + "!"},
        {"grant:join_agreement(f3, f1)", "join_agr" + sfx + "?"},
        {"act:perf(changing_lane(1))", "veh_lane" + sfx + "!"},
        {"grant:changed_lane", "veh_lane_done" + sfx + "?"},
        {"act:perf(speed_contr(1))", "veh_dist" + sfx + "!"},
        {"grant:joining_distance", "veh_dist_done" + sfx + "?"},
        {"msg:message(f3, joined_succ)", "joined_suc" + sfx + "!"},
        {"grant:platoon_m", "join_conf" + sfx + "?"},
        {"grant:set_space_cmd(" + inc + ")", "set_space_incr" + sfx + "?"},
        {"grant:set_space_cmd(" + nrm + ")", "set_space_decr" + sfx + "?"},
        {"act:perf(set_space(" + inc + "))", "veh_space" + sfx + "!"},
        {"act:perf(set_space(" + nrm + "))", "veh_space" + sfx + "!"},
        {"grant:spacing_done(" + inc + ")", "veh_space_done" + sfx + "?"},
        {"grant:spacing_done(" + nrm + ")", "veh_space_done" + sfx + "?"},
        {"msg:spacing_ack(f3, " + inc + ")", "spacing_ack" + sfx + "!"},
        {"msg:spacing_ack(f3, " + nrm + ")", "spacing_ack" + sfx + "!"},
        {"msg:leave_req(f3)", "leave_r" + sfx + "!"},
        {"grant:leave_agr(f3)", "leave_agr" + sfx + "?"},
        {"act:perf(changing_lane(0))", "veh_lane" + sfx + "!"},
        {"grant:left_lane", "veh_lane_done" + sfx + "?"},
        {"msg:message(f3, left_succ)", "left_suc" + sfx + "!"},
    };
    m.resets = {
        {"join_r" + sfx + "!", {"process_time"}},
        {"leave_r" + sfx + "!", {"process_time"}},
    };
    m.updates = {
        {"set_space_incr" + sfx + "?", {{"incr_spacing", 1}, {"spacing_done", 0}}},
        {"set_space_decr" + sfx + "?", {{"incr_spacing", 0}, {"spacing_done", 0}}},
        {"veh_space_done" + sfx + "?", {{"spacing_done", 1}}},
    };
    LabelMap::Alias wja;
    wja.name = "wait_j_agr";
    wja.after = {"join_r" + sfx + "!"};
    wja.before = {"join_agr" + sfx + "?"};
    m.aliases.push_back(wja);
    LabelMap::Alias rdy;
    rdy.name = "rdy_ch_lane";
    rdy.after = {"join_agr" + sfx + "?"};
    rdy.before = {"veh_lane" + sfx + "!"};
    m.aliases.push_back(rdy);
    LabelMap::Alias jc;
    jc.name = "join_completed";
    jc.at_event = true;
    jc.at = "join_conf" + sfx + "?";
    m.aliases.push_back(jc);
    LabelMap::Alias lc;
    lc.name = "leave_completed";
    lc.at_event = true;
    lc.at = "left_suc" + sfx + "!";
    m.aliases.push_back(lc);
    return m;
}

CheckScenario extraction_scenario_joiner(const std::string& name) {
    CheckScenario s = scenario_join(EnvProfile::may_all()
                                        .set("set_space_cmd", EnvProfile::Grant::May)
                                        .set("leave_wish", EnvProfile::Grant::Never),
                                    name);
    return s;
}

CheckScenario extraction_scenario_full(const std::string& name) {
    CheckScenario s = scenario_join(EnvProfile::may_all()
                                        .set("set_space_cmd", EnvProfile::Grant::May)
                                        .set("leave_wish", EnvProfile::Grant::May),
                                    name);
    return s;
}

CheckScenario extraction_scenario_member(const std::string& name) {
    CheckScenario s = scenario_leave(EnvProfile::may_all()
                                         .set("set_space_cmd", EnvProfile::Grant::May)
                                         .set("leave_wish", EnvProfile::Grant::Never),
                                     name);
    // members that only serve: no leave goal
    s.replace_goals = true;
    s.goal_overrides.clear();
    return s;
}

TimedNet substituted_platoon_net(const PlatoonNetConfig& cfg, const ExtractOptions& opts) {
    TimedNet net = build_platoon_net(cfg);
    for (int i = 1; i <= cfg.followers; ++i) {
        CheckScenario scenario =
            i == 1 ? extraction_scenario_member("extract_a1")
                   : (i == 2 ? extraction_scenario_full("extract_a2")
                             : extraction_scenario_joiner("extract_a" + std::to_string(i)));
        FiniteAutomaton io = extract_io(scenario, opts);
        TimedAutomaton sub = substitute_agent(io, follower_label_map(i), // spacing defaults
                                              "a" + std::to_string(i), net.channels);
        int idx = net.automaton_index("a" + std::to_string(i));
        if (idx < 0) throw ConfigError("net has no agent a" + std::to_string(i));
        net.automata[idx] = std::move(sub);
    }
    net.validate();
    return net;
}

std::string ComposedReport::to_text() const {
    std::ostringstream os;
    for (const ComposedClause& c : clauses) {
        std::string v = c.outcome == ComposedClause::Outcome::Holds
                            ? "holds"
                            : c.outcome == ComposedClause::Outcome::Fails ? "FAILS"
                                                                          : "INCONCLUSIVE";
        os << "clause " << c.id << " [" << c.component << "] " << c.property << " : " << v;
        if (!c.note.empty()) os << " (" << c.note << ")";
        os << "  states=" << c.states << " wall_ms=" << static_cast<long>(c.wall_ms) << "\n";
    }
    std::string v = outcome == ComposedClause::Outcome::Holds
                        ? "holds"
                        : outcome == ComposedClause::Outcome::Fails ? "FAILS" : "INCONCLUSIVE";
    os << "composed verdict: " << v << "\n";
    return os.str();
}

ComposedSpec default_composed_spec() {
    ComposedSpec spec;
    // In the shipped platoon every follower runs the same program, so the
    // per-agent clauses verify each property once against its profile and
    // stand for every vehicle running that code.
    char clause = 'a';
    for (const AgentPropertyCase& c : shipped_agent_suite()) {
        ComposedSpec::AgentCheck chk;
        chk.clause = std::string(1, clause);
        chk.agent = "f3";
        chk.scenario = c.scenario;
        chk.properties = {{c.name, c.formula}};
        spec.agent_checks.push_back(std::move(chk));
    }
    spec.timed_properties = platoon_property_suite(spec.net_cfg);
    return spec;
}

ComposedReport verify_composed(const ComposedSpec& spec, const CheckOptions& agent_opts,
                               const TimedCheckOptions& timed_opts) {
    ComposedReport report;
    auto worse = [](ComposedClause::Outcome a, ComposedClause::Outcome b) {
        using O = ComposedClause::Outcome;
        if (a == O::Fails || b == O::Fails) return O::Fails;
        if (a == O::Inconclusive || b == O::Inconclusive) return O::Inconclusive;
        return O::Holds;
    };

    for (const auto& chk : spec.agent_checks) {
        ComposedSystem sys = compose(chk.scenario.program, chk.scenario.make_envs(),
                                     chk.scenario.extra_beliefs, chk.scenario.goal_overrides,
                                     chk.scenario.replace_goals);
        for (const auto& [pname, formula] : chk.properties) {
            ComposedClause c;
            c.id = chk.clause;
            c.component = chk.agent + " || " + chk.scenario.name;
            c.property = pname;
            // locality: agent properties must name the checked agent only
            auto agents = agents_of(formula);
            try {
                if (agents.size() > 1)
                    throw ConfigError("property names more than one agent");
                Verdict v = check(sys, formula, agent_opts);
                c.outcome = v.holds ? ComposedClause::Outcome::Holds
                                    : ComposedClause::Outcome::Fails;
                c.states = v.system_states;
                c.wall_ms = v.wall_ms;
            } catch (const BoundError& e) {
                c.outcome = ComposedClause::Outcome::Inconclusive;
                c.note = e.what();
            } catch (const ConfigError& e) {
                c.outcome = ComposedClause::Outcome::Inconclusive;
                c.note = e.what();
            }
            report.outcome = worse(report.outcome, c.outcome);
            report.clauses.push_back(std::move(c));
        }
    }

    TimedNet net;
    try {
        net = spec.use_extracted_agents ? substituted_platoon_net(spec.net_cfg)
                                        : build_platoon_net(spec.net_cfg);
    } catch (const BoundError& e) {
        ComposedClause c;
        c.id = "c";
        c.component = "timed net extraction";
        c.outcome = ComposedClause::Outcome::Inconclusive;
        c.note = e.what();
        report.outcome = worse(report.outcome, c.outcome);
        report.clauses.push_back(std::move(c));
        return report;
    }

    for (const TimedProperty& p : spec.timed_properties) {
        ComposedClause c;
        c.id = "c";
        c.component = spec.use_extracted_agents ? "platoon net (extracted agents)"
                                                : "platoon net";
        c.property = p.name;
        try {
            TimedVerdict v = check_property(net, p, timed_opts);
            c.outcome =
                v.holds ? ComposedClause::Outcome::Holds : ComposedClause::Outcome::Fails;
            c.states = v.states;
            c.wall_ms = v.wall_ms;
        } catch (const BoundError& e) {
            c.outcome = ComposedClause::Outcome::Inconclusive;
            c.note = e.what();
        }
        report.outcome = worse(report.outcome, c.outcome);
        report.clauses.push_back(std::move(c));
    }
    return report;
}

}  // namespace plv
