#include "plv/bdi.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "plv/diagnostics.hpp"

namespace plv {

std::string Event::str() const {
    if (kind == Kind::BeliefAdded) return "+" + term.str();
    return "+!" + term.str() + "[" + to_string(goal_kind) + "]";
}

std::string Message::str() const {
    return "send(" + recipient + ", :" + performative + ", " + content.str() + ")";
}

namespace {

Term rename_vars(const Term& t, const std::string& suffix) {
    if (t.is_var()) return Term::var(t.text() + suffix);
    if (!t.is_compound()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(rename_vars(a, suffix));
    return Term::compound(t.text(), std::move(args));
}

// SLD enumeration of literal solutions: the pattern is matched against the
// beliefs, then against rule heads with bodies proved left to right. Order
// is deterministic (beliefs in set order, rules in source order). The
// visitor returns true to stop the search.
bool solve_literal(const Term& pattern, const Subst& seed, const std::set<Term>& beliefs,
                   const std::vector<ReasoningRule>& rules, int depth,
                   const std::function<bool(const Subst&)>& visit);

bool solve_body(const std::vector<Term>& body, size_t idx, const Subst& seed,
                const std::set<Term>& beliefs, const std::vector<ReasoningRule>& rules, int depth,
                const std::function<bool(const Subst&)>& visit) {
    if (idx == body.size()) return visit(seed);
    return solve_literal(body[idx], seed, beliefs, rules, depth, [&](const Subst& s) {
        return solve_body(body, idx + 1, s, beliefs, rules, depth, visit);
    });
}

bool solve_literal(const Term& pattern, const Subst& seed, const std::set<Term>& beliefs,
                   const std::vector<ReasoningRule>& rules, int depth,
                   const std::function<bool(const Subst&)>& visit) {
    if (depth <= 0) throw BoundError("deduction depth bound exceeded");
    for (const Term& b : beliefs) {
        if (auto s = unify(pattern, b, seed)) {
            if (visit(*s)) return true;
        }
    }
    for (size_t ri = 0; ri < rules.size(); ++ri) {
        std::string suffix = "__r" + std::to_string(depth) + "_" + std::to_string(ri);
        Term head = rename_vars(rules[ri].head, suffix);
        auto s = unify(pattern, head, seed);
        if (!s) continue;
        std::vector<Term> body;
        body.reserve(rules[ri].body.size());
        for (const Term& l : rules[ri].body) body.push_back(rename_vars(l, suffix));
        if (solve_body(body, 0, *s, beliefs, rules, depth - 1, visit)) return true;
    }
    return false;
}

}  // namespace

bool deducible(const Term& t, const std::set<Term>& beliefs,
               const std::vector<ReasoningRule>& rules, int depth_bound) {
    return solve_literal(t, Subst{}, beliefs, rules, depth_bound,
                         [](const Subst&) { return true; });
}

std::set<Term> deduce(const std::set<Term>& beliefs, const std::vector<ReasoningRule>& rules,
                      int iteration_bound) {
    std::set<Term> out = beliefs;
    for (int pass = 0; pass < iteration_bound; ++pass) {
        size_t before = out.size();
        for (const ReasoningRule& r : rules) {
            std::vector<Term> derived;
            solve_body(r.body, 0, Subst{}, out, {}, 8, [&](const Subst& s) {
                Term head = s.apply(r.head);
                if (head.ground()) derived.push_back(head);
                return false;  // enumerate all matches
            });
            for (Term& d : derived) out.insert(std::move(d));
        }
        if (out.size() == before) return out;
    }
    throw BoundError("deduce: fixpoint not reached within iteration bound");
}

std::optional<Subst> solve_guard(const AgentState& st, const std::vector<GuardLiteral>& guard,
                                 const Subst& seed, const AgentProgram& program) {
    // Depth-first over the literals with backtracking on positive matches;
    // negation is absence of any match under the bindings accumulated so far.
    std::function<std::optional<Subst>(size_t, const Subst&)> go =
        [&](size_t idx, const Subst& s) -> std::optional<Subst> {
        if (idx == guard.size()) return s;
        const GuardLiteral& lit = guard[idx];
        if (lit.mod == GuardLiteral::Mod::Belief) {
            Term goal = s.apply(lit.pattern);
            if (lit.positive) {
                std::optional<Subst> found;
                solve_literal(goal, s, st.beliefs, program.rules, 64, [&](const Subst& s2) {
                    auto rest = go(idx + 1, s2);
                    if (rest) {
                        found = rest;
                        return true;
                    }
                    return false;
                });
                return found;
            }
            bool any = solve_literal(goal, s, st.beliefs, program.rules, 64,
                                     [](const Subst&) { return true; });
            if (any) return std::nullopt;
            return go(idx + 1, s);
        }
        auto matches = [&](const std::pair<Term, GoalKind>& g,
                           const Subst& s0) -> std::optional<Subst> {
            if (lit.goal_kind && *lit.goal_kind != g.second) return std::nullopt;
            return unify(lit.pattern, g.first, s0);
        };
        if (lit.positive) {
            for (const auto& g : st.goals) {
                if (auto s2 = matches(g, s)) {
                    if (auto rest = go(idx + 1, *s2)) return rest;
                }
            }
            return std::nullopt;
        }
        for (const auto& g : st.goals)
            if (matches(g, s)) return std::nullopt;
        return go(idx + 1, s);
    };
    return go(0, seed);
}

namespace {

std::string instance_sig(const AgentProgram& program, int plan_index, const Subst& s) {
    const Plan& p = program.plans[plan_index];
    std::string sig = std::to_string(plan_index) + "|" + s.apply(p.trigger_pattern).str();
    for (const BodyStep& b : p.body) sig += "|" + s.apply(b.term).str();
    return sig;
}

bool live_instance(const AgentState& st, const std::string& sig) {
    for (const Intention& it : st.intentions)
        if (it.birth_sig == sig) return true;
    return false;
}

void enqueue_event(AgentState& st, const Event& ev) {
    if (std::find(st.events.begin(), st.events.end(), ev) != st.events.end()) return;
    st.events.push_back(ev);
}

// Inserts a ground belief, enqueues the belief-added event when new, and
// wakes suspended intentions whose wait pattern unifies with it.
void add_belief(AgentState& st, const Term& belief) {
    if (st.beliefs.count(belief)) return;
    st.beliefs.insert(belief);
    enqueue_event(st, Event{Event::Kind::BeliefAdded, belief, GoalKind::Achieve});
    for (Intention& it : st.intentions) {
        if (!it.suspended) continue;
        if (auto s = unify(it.wait_pattern, belief)) {
            it.suspended = false;
            if (!it.frames.empty()) {
                if (!it.frames.back().subst.merge(*s))
                    throw ConfigError("wake-up bindings conflict for " + it.wait_pattern.str());
            }
        }
    }
}

// Removes the intention at pos; the cursor keeps pointing at the element
// that followed it.
void remove_intention(AgentState& st, size_t pos) {
    for (const Frame& f : st.intentions[pos].frames)
        if (f.owns_goal) st.goals.erase(*f.owns_goal);
    st.intentions.erase(st.intentions.begin() + static_cast<long>(pos));
    if (st.rr_cursor > pos) --st.rr_cursor;
    if (st.intentions.empty())
        st.rr_cursor = 0;
    else
        st.rr_cursor %= st.intentions.size();
}

// An achieve goal is dropped exactly when it has become deducible; its
// pending events and intentions go with it.
void sweep_achieved_goals(AgentState& st, const AgentProgram& program) {
    std::vector<Term> done;
    for (const auto& [g, k] : st.goals) {
        if (k != GoalKind::Achieve) continue;
        if (deducible(g, st.beliefs, program.rules)) done.push_back(g);
    }
    for (const Term& g : done) {
        st.goals.erase({g, GoalKind::Achieve});
        for (auto it = st.events.begin(); it != st.events.end();) {
            if (it->kind == Event::Kind::GoalAdded && it->goal_kind == GoalKind::Achieve &&
                it->term == g)
                it = st.events.erase(it);
            else
                ++it;
        }
        for (size_t i = 0; i < st.intentions.size();) {
            if (st.intentions[i].root_goal && *st.intentions[i].root_goal == g)
                remove_intention(st, i);
            else
                ++i;
        }
    }
}

void pop_finished_frames(AgentState& st, const AgentProgram& program, Intention& it) {
    while (!it.frames.empty()) {
        Frame& f = it.frames.back();
        const Plan& plan = program.plans[f.plan_index];
        if (f.pc < plan.body.size()) break;
        if (f.owns_goal) st.goals.erase(*f.owns_goal);
        it.frames.pop_back();
    }
}

}  // namespace

AgentState init_agent(const AgentProgram& program) {
    AgentState st;
    st.name = program.name.empty() ? "agent" : program.name;
    for (const Term& b : program.initial_beliefs) st.beliefs.insert(b);
    for (const auto& [g, k] : program.initial_goals) {
        st.goals.insert({g, k});
        enqueue_event(st, Event{Event::Kind::GoalAdded, g, k});
    }
    return st;
}

AgentState perceive(const AgentState& st0, const std::vector<Term>& adds,
                    const std::vector<Term>& removes) {
    AgentState st = st0;
    st.last_action.reset();
    for (const Term& t : adds) {
        if (!t.ground()) throw ConfigError("percept not ground: " + t.str());
        add_belief(st, t);
    }
    for (const Term& t : removes) st.beliefs.erase(t);
    return st;
}

std::optional<std::pair<int, Subst>> select_plan(const AgentState& st, const Event& ev,
                                                 const AgentProgram& program) {
    for (size_t i = 0; i < program.plans.size(); ++i) {
        const Plan& p = program.plans[i];
        if (ev.kind == Event::Kind::GoalAdded) {
            if (p.trigger != Plan::Trigger::GoalAdded || p.trigger_kind != ev.goal_kind) continue;
        } else {
            if (p.trigger != Plan::Trigger::BeliefAdded) continue;
        }
        auto s0 = unify(p.trigger_pattern, ev.term);
        if (!s0) continue;
        auto s = solve_guard(st, p.guard, *s0, program);
        if (!s) continue;
        if (live_instance(st, instance_sig(program, static_cast<int>(i), *s))) continue;
        return std::make_pair(static_cast<int>(i), *s);
    }
    return std::nullopt;
}

StepResult step(const AgentState& st0, const AgentProgram& program) {
    StepResult res;
    AgentState& st = res.state;
    st = st0;
    st.last_action.reset();

    sweep_achieved_goals(st, program);

    // One event attempt per cycle; on failure the event is requeued (achieve
    // goals) or dropped, and the cycle falls through to intention execution
    // so a busy queue cannot starve the intentions.
    if (!st.events.empty()) {
        Event ev = st.events.front();
        st.events.pop_front();
        res.obs.consumed_event = ev;
        bool goal_gone =
            ev.kind == Event::Kind::GoalAdded && !st.goals.count({ev.term, ev.goal_kind});
        if (!goal_gone) {
            if (auto sel = select_plan(st, ev, program)) {
                Intention in;
                Frame f;
                f.plan_index = sel->first;
                f.subst = sel->second;
                if (ev.kind == Event::Kind::GoalAdded && ev.goal_kind == GoalKind::Perform)
                    f.owns_goal = std::make_pair(ev.term, GoalKind::Perform);
                in.frames.push_back(std::move(f));
                if (ev.kind == Event::Kind::GoalAdded && ev.goal_kind == GoalKind::Achieve)
                    in.root_goal = ev.term;
                in.birth_sig = instance_sig(program, sel->first, sel->second);
                st.intentions.push_back(std::move(in));
                res.obs.note =
                    "plan " + std::to_string(sel->first + 1) + " selected for " + ev.str();
                return res;
            }
            if (ev.kind == Event::Kind::GoalAdded && ev.goal_kind == GoalKind::Achieve)
                enqueue_event(st, ev);
            else if (ev.kind == Event::Kind::GoalAdded && ev.goal_kind == GoalKind::Perform)
                st.goals.erase({ev.term, ev.goal_kind});  // perform goals do not retry
        }
    }

    // Round-robin-next active intention.
    size_t n = st.intentions.size();
    size_t pos = n;
    for (size_t i = 0; i < n; ++i) {
        size_t idx = (st.rr_cursor + i) % n;
        Intention& cand = st.intentions[idx];
        if (!cand.suspended && !cand.frames.empty()) {
            pos = idx;
            break;
        }
    }
    if (pos == n) {
        if (res.obs.note.empty()) res.obs.note = "idle";
        return res;
    }

    // Completion handling: drop exhausted frames; an intention that ends up
    // empty (typically after waking at its final wait) re-posts its achieve
    // goal when unachieved and disappears.
    auto complete_if_done = [&](size_t at) {
        Intention& cand = st.intentions[at];
        pop_finished_frames(st, program, cand);
        if (!cand.frames.empty()) return false;
        if (cand.root_goal && st.goals.count({*cand.root_goal, GoalKind::Achieve}) &&
            !deducible(*cand.root_goal, st.beliefs, program.rules)) {
            enqueue_event(st, Event{Event::Kind::GoalAdded, *cand.root_goal, GoalKind::Achieve});
        }
        remove_intention(st, at);
        return true;
    };

    if (complete_if_done(pos)) {
        if (res.obs.note.empty()) res.obs.note = "intention completed";
        return res;
    }

    Intention& in = st.intentions[pos];
    Frame& frame = in.frames.back();
    const Plan& plan = program.plans[frame.plan_index];
    const BodyStep& bs = plan.body[frame.pc];
    Subst sig = frame.subst;
    ++frame.pc;

    switch (bs.kind) {
        case BodyStep::Kind::AddBelief: {
            Term t = sig.apply(bs.term);
            if (!t.ground()) throw ConfigError("belief addition not ground: " + t.str());
            add_belief(st, t);
            res.obs.note = "+" + t.str();
            break;
        }
        case BodyStep::Kind::RemoveBelief: {
            Term t = sig.apply(bs.term);
            if (t.ground()) {
                st.beliefs.erase(t);
            } else {
                for (auto it = st.beliefs.begin(); it != st.beliefs.end();) {
                    if (unify(t, *it))
                        it = st.beliefs.erase(it);
                    else
                        ++it;
                }
            }
            res.obs.note = "-" + t.str();
            break;
        }
        case BodyStep::Kind::AddGoal: {
            Term g = sig.apply(bs.term);
            if (bs.goal_kind == GoalKind::Achieve) {
                st.goals.insert({g, GoalKind::Achieve});
                enqueue_event(st, Event{Event::Kind::GoalAdded, g, GoalKind::Achieve});
                res.obs.note = "+!" + g.str() + "[achieve]";
            } else {
                Event ev{Event::Kind::GoalAdded, g, GoalKind::Perform};
                if (auto sel = select_plan(st, ev, program)) {
                    st.goals.insert({g, GoalKind::Perform});
                    Frame f;
                    f.plan_index = sel->first;
                    f.subst = sel->second;
                    f.owns_goal = std::make_pair(g, GoalKind::Perform);
                    in.frames.push_back(std::move(f));
                    res.obs.note = "+!" + g.str() + "[perform]";
                } else {
                    res.obs.note = "+!" + g.str() + "[perform] (no plan)";
                }
            }
            break;
        }
        case BodyStep::Kind::WaitFor: {
            Term p = sig.apply(bs.term);
            std::optional<Subst> hit;
            for (const Term& b : st.beliefs) {
                if (auto s = unify(p, b)) {
                    hit = s;
                    break;
                }
            }
            if (hit) {
                if (!in.frames.back().subst.merge(*hit))
                    throw ConfigError("wait bindings conflict for " + p.str());
                res.obs.note = "*" + p.str() + " (already true)";
            } else {
                in.suspended = true;
                in.wait_pattern = p;
                res.obs.note = "*" + p.str() + " (suspended)";
            }
            break;
        }
        case BodyStep::Kind::Perform: {
            Term a = sig.apply(bs.term);
            if (!a.ground()) throw ConfigError("action not ground: " + a.str());
            Term act = Term::compound("perf", {a});
            st.last_action = act;
            res.obs.action = act;
            res.obs.note = act.str();
            break;
        }
        case BodyStep::Kind::Send: {
            Term c = sig.apply(bs.term);
            if (!c.ground()) throw ConfigError("message content not ground: " + c.str());
            Term rcpt = sig.apply(bs.recipient);
            if (!rcpt.is_atom())
                throw ConfigError("unresolved message recipient: " + rcpt.str());
            if (rcpt.text() == st.name)
                throw ConfigError("agent may not send to itself: " + st.name);
            Message m{st.name, rcpt.text(), bs.performative, c};
            st.outbox.push_back(m);
            res.obs.message = m;
            res.obs.note = m.str();
            break;
        }
    }

    bool removed = false;
    if (!st.intentions[pos].suspended) removed = complete_if_done(pos);
    if (!removed && !st.intentions.empty()) st.rr_cursor = (pos + 1) % st.intentions.size();
    return res;
}

bool quiescent(const AgentState& st, const AgentProgram& program) {
    AgentState cleared = st;
    cleared.last_action.reset();
    StepResult r = step(st, program);
    return r.state == cleared && !r.obs.action && !r.obs.message;
}

std::string AgentState::encode() const {
    std::ostringstream os;
    os << name << "#B";
    for (const Term& b : beliefs) os << "|" << b.str();
    os << "#G";
    for (const auto& [g, k] : goals)
        os << "|" << g.str() << (k == GoalKind::Achieve ? "!a" : "!p");
    os << "#E";
    for (const Event& e : events) os << "|" << e.str();
    os << "#I";
    for (const Intention& in : intentions) {
        os << "|[";
        for (const Frame& f : in.frames) {
            os << "(" << f.plan_index << "@" << f.pc << f.subst.str();
            if (f.owns_goal) os << "^" << f.owns_goal->first.str();
            os << ")";
        }
        if (in.suspended) os << "~" << in.wait_pattern.str();
        if (in.root_goal) os << ">" << in.root_goal->str();
        os << "]";
    }
    os << "#c" << rr_cursor;
    os << "#a" << (last_action ? last_action->str() : "-");
    os << "#O";
    for (const Message& m : outbox) os << "|" << m.str();
    return os.str();
}

std::string trace_line(const std::string& agent, const Observables& obs) {
    std::string ev = obs.consumed_event ? obs.consumed_event->str() : "-";
    std::string act = obs.action ? obs.action->str() : "-";
    std::string msg = obs.message ? obs.message->str() : "-";
    std::string note = obs.note.empty() ? "-" : obs.note;
    return agent + " | ev=" + ev + " | step=" + note + " | act=" + act + " | send=" + msg;
}

}  // namespace plv
