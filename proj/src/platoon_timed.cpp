#include "plv/platoon_timed.hpp"

#include <algorithm>

namespace plv {

void DurationTable::validate() const {
    auto ok = [](int lo, int hi) { return 0 <= lo && lo <= hi; };
    if (!ok(change_lane_lo, change_lane_hi) || !ok(set_space_lo, set_space_hi) ||
        !ok(join_distance_lo, join_distance_hi))
        throw ConfigError("duration windows must satisfy 0 <= lo <= hi");
}

int PlatoonNetConfig::ack_timeout() const {
    // Upper bound for setting space, changing lane and closing the distance.
    return durations.set_space_hi + durations.change_lane_hi + durations.join_distance_hi;
}

int PlatoonNetConfig::join_total_lo() const {
    return durations.set_space_lo + waits.pre_agreement + durations.change_lane_lo +
           durations.join_distance_lo + durations.set_space_lo + waits.pre_confirmation;
}

int PlatoonNetConfig::join_total_hi() const {
    return durations.set_space_hi + waits.pre_agreement + durations.change_lane_hi +
           durations.join_distance_hi + durations.set_space_hi + waits.pre_confirmation;
}

int PlatoonNetConfig::leave_total_lo() const {
    return waits.pre_agreement + durations.set_space_lo + durations.change_lane_lo;
}

int PlatoonNetConfig::leave_total_hi() const {
    return waits.pre_agreement + durations.set_space_hi + durations.change_lane_hi;
}

namespace {

struct TaBuilder {
    TimedAutomaton ta;

    explicit TaBuilder(std::string name) { ta.name = std::move(name); }

    int clock(const std::string& n) {
        ta.clocks.push_back(n);
        return static_cast<int>(ta.clocks.size()) - 1;
    }
    int var(const std::string& n, int init) {
        ta.vars.push_back(n);
        ta.var_init.push_back(init);
        return static_cast<int>(ta.vars.size()) - 1;
    }
    int loc(const std::string& n, std::vector<GuardAtom> inv = {}) {
        ta.locations.push_back({n, {}, std::move(inv)});
        return static_cast<int>(ta.locations.size()) - 1;
    }
    TimedEdge& edge(int src, int dst, const std::string& action = "") {
        TimedEdge e;
        e.src = src;
        e.dst = dst;
        e.action = action;
        ta.edges.push_back(std::move(e));
        return ta.edges.back();
    }

    static GuardAtom clock_le(int c, int n) { return {true, c, CmpOp::Le, n}; }
    static GuardAtom clock_ge(int c, int n) { return {true, c, CmpOp::Ge, n}; }
    static GuardAtom clock_eq(int c, int n) { return {true, c, CmpOp::Eq, n}; }
    static GuardAtom var_eq(int v, int n) { return {false, v, CmpOp::Eq, n}; }
};

std::string chan(const std::string& base, int i) { return base + "_" + std::to_string(i); }

struct ChannelTable {
    std::vector<std::string> names;
    int id(const std::string& n) {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return static_cast<int>(i);
        names.push_back(n);
        return static_cast<int>(names.size()) - 1;
    }
};

ChannelTable platoon_channels(int followers) {
    ChannelTable t;
    for (int i = 1; i <= followers; ++i) {
        for (const char* base : {"join_r", "join_agr", "joined_suc", "join_conf", "leave_r",
                                 "leave_agr", "left_suc", "set_space_incr", "set_space_decr",
                                 "spacing_ack", "sw_steer", "veh_lane", "veh_lane_done",
                                 "veh_space", "veh_space_done", "veh_dist", "veh_dist_done"})
            t.id(chan(base, i));
    }
    return t;
}

}  // namespace

TimedAutomaton build_vehicle(int i, const PlatoonNetConfig& cfg) {
    cfg.durations.validate();
    ChannelTable ch = platoon_channels(cfg.followers);
    TaBuilder b("v" + std::to_string(i));
    int x = b.clock("x");
    const DurationTable& d = cfg.durations;

    int idle = b.loc("idle");
    // Change lane completes in its window; if enabled, it may instead fail
    // silently one tick past the window (the response is never sent).
    int lane_inv = cfg.lane_can_fail ? d.change_lane_hi + 1 : d.change_lane_hi;
    int lane_busy = b.loc("lane_busy", {TaBuilder::clock_le(x, lane_inv)});
    int space_busy = b.loc("space_busy", {TaBuilder::clock_le(x, d.set_space_hi)});
    int dist_busy = b.loc("dist_busy", {TaBuilder::clock_le(x, d.join_distance_hi)});

    {
        auto& e = b.edge(idle, lane_busy, "lane command");
        e.channel = ch.id(chan("veh_lane", i));
        e.resets = {x};
    }
    {
        auto& e = b.edge(lane_busy, idle, "lane done");
        e.channel = ch.id(chan("veh_lane_done", i));
        e.send = true;
        e.guard = {TaBuilder::clock_ge(x, d.change_lane_lo),
                   TaBuilder::clock_le(x, d.change_lane_hi)};
    }
    if (cfg.lane_can_fail) {
        auto& e = b.edge(lane_busy, idle, "lane_fail");
        e.guard = {TaBuilder::clock_ge(x, d.change_lane_hi + 1)};
    }
    {
        auto& e = b.edge(idle, space_busy, "space command");
        e.channel = ch.id(chan("veh_space", i));
        e.resets = {x};
    }
    {
        auto& e = b.edge(space_busy, idle, "space done");
        e.channel = ch.id(chan("veh_space_done", i));
        e.send = true;
        e.guard = {TaBuilder::clock_ge(x, d.set_space_lo)};
    }
    {
        auto& e = b.edge(idle, dist_busy, "distance command");
        e.channel = ch.id(chan("veh_dist", i));
        e.resets = {x};
    }
    {
        auto& e = b.edge(dist_busy, idle, "distance done");
        e.channel = ch.id(chan("veh_dist_done", i));
        e.send = true;
        e.guard = {TaBuilder::clock_ge(x, d.join_distance_lo)};
    }
    return b.ta;
}

TimedAutomaton build_agent(int i, const PlatoonNetConfig& cfg, const AgentOptions& opts) {
    ChannelTable ch = platoon_channels(cfg.followers);
    TaBuilder b("a" + std::to_string(i));
    int pt = b.clock("process_time");
    int u = b.clock("u");
    int member = b.var("member", opts.initially_member ? 1 : 0);
    int incr_spacing = b.var("incr_spacing", 0);
    int spacing_done = b.var("spacing_done", 0);

    auto urgent = [&]() { return std::vector<GuardAtom>{TaBuilder::clock_le(u, 0)}; };

    int idle = b.loc("idle");

    if (opts.can_join) {
        // JOIN region: request, agreement, lane change, closing distance,
        // acknowledgement, confirmation.
        int wait_j_agr = b.loc("wait_j_agr");
        int rdy_ch_lane = b.loc("rdy_ch_lane", urgent());
        int j_lane_wait = b.loc("j_lane_wait");
        int j_dist_cmd = b.loc("j_dist_cmd", urgent());
        int j_dist_wait = b.loc("j_dist_wait");
        int j_suc = b.loc("j_suc", urgent());
        int wait_j_conf = b.loc("wait_j_conf");
        int join_completed =
            b.loc("join_completed", {TaBuilder::clock_le(pt, cfg.join_total_hi())});

        {
            auto& e = b.edge(idle, wait_j_agr, "join request");
            e.channel = ch.id(chan("join_r", i));
            e.send = true;
            e.guard = {TaBuilder::var_eq(member, 0)};
            e.resets = {pt};
        }
        {
            auto& e = b.edge(wait_j_agr, rdy_ch_lane, "agreement");
            e.channel = ch.id(chan("join_agr", i));
            e.resets = {u};
        }
        {
            auto& e = b.edge(rdy_ch_lane, j_lane_wait, "lane command");
            e.channel = ch.id(chan("veh_lane", i));
            e.send = true;
        }
        {
            auto& e = b.edge(j_lane_wait, j_dist_cmd, "lane done");
            e.channel = ch.id(chan("veh_lane_done", i));
            e.resets = {u};
        }
        {
            auto& e = b.edge(j_dist_cmd, j_dist_wait, "distance command");
            e.channel = ch.id(chan("veh_dist", i));
            e.send = true;
        }
        {
            auto& e = b.edge(j_dist_wait, j_suc, "distance done");
            e.channel = ch.id(chan("veh_dist_done", i));
            e.resets = {u};
        }
        {
            auto& e = b.edge(j_suc, wait_j_conf, "join acknowledgement");
            e.channel = ch.id(chan("joined_suc", i));
            e.send = true;
        }
        {
            auto& e = b.edge(wait_j_conf, join_completed, "confirmation");
            e.channel = ch.id(chan("join_conf", i));
        }
        {
            auto& e = b.edge(join_completed, idle, "become member");
            e.updates = {{member, false, 1}};
        }
    }

    if (opts.can_leave) {
        // LEAVE region: authorisation, open own spacing, hand controls back,
        // change lane out, acknowledge.
        int wait_l_agr = b.loc("wait_l_agr");
        int l_space_cmd = b.loc("l_space_cmd", urgent());
        int l_space_wait = b.loc("l_space_wait");
        int l_manual = b.loc("l_manual", urgent());
        int l_lane_cmd = b.loc("l_lane_cmd", urgent());
        int l_lane_wait = b.loc("l_lane_wait");
        int l_suc = b.loc("l_suc", urgent());
        int leave_completed =
            b.loc("leave_completed", {TaBuilder::clock_le(pt, cfg.leave_total_hi())});

        {
            auto& e = b.edge(idle, wait_l_agr, "leave request");
            e.channel = ch.id(chan("leave_r", i));
            e.send = true;
            e.guard = {TaBuilder::var_eq(member, 1)};
            e.resets = {pt};
        }
        {
            auto& e = b.edge(wait_l_agr, l_space_cmd, "leave agreement");
            e.channel = ch.id(chan("leave_agr", i));
            e.resets = {u};
        }
        {
            auto& e = b.edge(l_space_cmd, l_space_wait, "space command");
            e.channel = ch.id(chan("veh_space", i));
            e.send = true;
        }
        {
            auto& e = b.edge(l_space_wait, l_manual, "space done");
            e.channel = ch.id(chan("veh_space_done", i));
            e.resets = {u};
        }
        {
            auto& e = b.edge(l_manual, l_lane_cmd, "manual controls");
            e.resets = {u};
        }
        {
            auto& e = b.edge(l_lane_cmd, l_lane_wait, "lane command");
            e.channel = ch.id(chan("veh_lane", i));
            e.send = true;
        }
        {
            auto& e = b.edge(l_lane_wait, l_suc, "lane done");
            e.channel = ch.id(chan("veh_lane_done", i));
            e.resets = {u};
        }
        {
            auto& e = b.edge(l_suc, leave_completed, "leave acknowledgement");
            e.channel = ch.id(chan("left_suc", i));
            e.send = true;
        }
        {
            auto& e = b.edge(leave_completed, idle, "membership ends");
            e.updates = {{member, false, 0}};
        }
    }

    {
        // SET-SPACE region: serve increase / decrease commands via the
        // vehicle and acknowledge to the leader.
        int ss_cmd = b.loc("ss_incr_cmd", urgent());
        int ss_wait = b.loc("ss_incr_wait");
        int ss_ack = b.loc("ss_incr_ack", urgent());
        int sd_cmd = b.loc("ss_decr_cmd", urgent());
        int sd_wait = b.loc("ss_decr_wait");
        int sd_ack = b.loc("ss_decr_ack", urgent());

        {
            auto& e = b.edge(idle, ss_cmd, "increase space");
            e.channel = ch.id(chan("set_space_incr", i));
            e.guard = {TaBuilder::var_eq(member, 1)};
            e.resets = {u};
            e.updates = {{incr_spacing, false, 1}, {spacing_done, false, 0}};
        }
        {
            auto& e = b.edge(ss_cmd, ss_wait, "space command");
            e.channel = ch.id(chan("veh_space", i));
            e.send = true;
        }
        {
            auto& e = b.edge(ss_wait, ss_ack, "space done");
            e.channel = ch.id(chan("veh_space_done", i));
            e.resets = {u};
            e.updates = {{spacing_done, false, 1}};
        }
        {
            auto& e = b.edge(ss_ack, idle, "spacing acknowledgement");
            e.channel = ch.id(chan("spacing_ack", i));
            e.send = true;
        }
        {
            auto& e = b.edge(idle, sd_cmd, "decrease space");
            e.channel = ch.id(chan("set_space_decr", i));
            e.guard = {TaBuilder::var_eq(member, 1)};
            e.resets = {u};
            e.updates = {{incr_spacing, false, 0}, {spacing_done, false, 0}};
        }
        {
            auto& e = b.edge(sd_cmd, sd_wait, "space command");
            e.channel = ch.id(chan("veh_space", i));
            e.send = true;
        }
        {
            auto& e = b.edge(sd_wait, sd_ack, "space done");
            e.channel = ch.id(chan("veh_space_done", i));
            e.resets = {u};
            e.updates = {{spacing_done, false, 1}};
        }
        {
            auto& e = b.edge(sd_ack, idle, "spacing acknowledgement");
            e.channel = ch.id(chan("spacing_ack", i));
            e.send = true;
        }
    }

    {
        // SW-STEERING region: immediate acknowledgement of a steering switch.
        int sw = b.loc("sw_steer", urgent());
        {
            auto& e = b.edge(idle, sw, "steering switch");
            e.channel = ch.id(chan("sw_steer", i));
            e.guard = {TaBuilder::var_eq(member, 1)};
            e.resets = {u};
        }
        b.edge(sw, idle, "steering switched");
    }

    return b.ta;
}

TimedAutomaton build_leader(const PlatoonNetConfig& cfg) {
    ChannelTable ch = platoon_channels(cfg.followers);
    TaBuilder b("l");
    int z = b.clock("z");
    int front = b.var("front", 0);
    int rear = b.var("rear", 1);
    std::vector<int> pred(cfg.followers + 1, -1);  // pred[i]: predecessor id of agent i
    for (int i = 2; i <= cfg.followers; ++i)
        pred[i] = b.var("p" + std::to_string(i), 0);

    const int W1 = cfg.waits.pre_agreement;
    const int W2 = cfg.waits.pre_confirmation;
    const int TO = cfg.ack_timeout();

    int idle = b.loc("idle");

    auto urgent_z = [&]() { return std::vector<GuardAtom>{TaBuilder::clock_le(z, 0)}; };

    // Join service chains, one per (requester i, current rear k). The rear
    // member opens the gap; the timeout branch restores spacing and returns
    // to idle without confirming. A successful acknowledgement always beats
    // the timeout because ack_timeout() exceeds lane + distance upper
    // bounds by set_space_hi.
    for (int i = 2; i <= cfg.followers; ++i) {
        for (int k = 1; k <= cfg.followers; ++k) {
            if (k == i) continue;
            std::string sfx = "_" + std::to_string(i) + "_" + std::to_string(k);
            int dispatch = b.loc("j_dispatch" + sfx, urgent_z());
            int wait_ack1 = b.loc("j_wait_gap" + sfx);
            int agr_wait = b.loc("j_agr_wait" + sfx, {TaBuilder::clock_le(z, W1)});
            int wait_suc = b.loc("j_wait_suc" + sfx, {TaBuilder::clock_le(z, TO)});
            int decr = b.loc("j_decr" + sfx, urgent_z());
            int wait_ack2 = b.loc("j_wait_close" + sfx);
            int conf_wait = b.loc("j_conf_wait" + sfx, {TaBuilder::clock_le(z, W2)});
            int t_decr = b.loc("j_timeout_decr" + sfx, urgent_z());
            int t_ack = b.loc("j_timeout_close" + sfx);

            {
                auto& e = b.edge(idle, dispatch, "join request");
                e.channel = ch.id(chan("join_r", i));
                e.guard = {TaBuilder::var_eq(rear, k)};
                e.resets = {z};
                e.updates = {{front, false, k}};
            }
            {
                auto& e = b.edge(dispatch, wait_ack1, "open gap");
                e.channel = ch.id(chan("set_space_incr", k));
                e.send = true;
            }
            {
                auto& e = b.edge(wait_ack1, agr_wait, "gap opened");
                e.channel = ch.id(chan("spacing_ack", k));
                e.resets = {z};
            }
            {
                auto& e = b.edge(agr_wait, wait_suc, "agreement");
                e.channel = ch.id(chan("join_agr", i));
                e.send = true;
                e.guard = {TaBuilder::clock_eq(z, W1)};
                e.resets = {z};
            }
            {
                auto& e = b.edge(wait_suc, decr, "acknowledgement");
                e.channel = ch.id(chan("joined_suc", i));
                e.resets = {z};
            }
            {
                auto& e = b.edge(wait_suc, t_decr, "ack timeout");
                e.guard = {TaBuilder::clock_eq(z, TO)};
                e.resets = {z};
            }
            {
                auto& e = b.edge(decr, wait_ack2, "close gap");
                e.channel = ch.id(chan("set_space_decr", k));
                e.send = true;
            }
            {
                auto& e = b.edge(wait_ack2, conf_wait, "gap closed");
                e.channel = ch.id(chan("spacing_ack", k));
                e.resets = {z};
            }
            {
                auto& e = b.edge(conf_wait, idle, "confirmation");
                e.channel = ch.id(chan("join_conf", i));
                e.send = true;
                e.guard = {TaBuilder::clock_eq(z, W2)};
                e.updates = {{rear, false, i}, {pred[i], false, k}};
            }
            {
                auto& e = b.edge(t_decr, t_ack, "close gap");
                e.channel = ch.id(chan("set_space_decr", k));
                e.send = true;
            }
            {
                auto& e = b.edge(t_ack, idle, "gap closed");
                e.channel = ch.id(chan("spacing_ack", k));
            }
        }
    }

    // Leave service: authorisation after the processing wait, then an
    // unbounded wait for the acknowledgement, with rear/predecessor repair.
    for (int i = 2; i <= cfg.followers; ++i) {
        std::string sfx = "_" + std::to_string(i);
        int lv = b.loc("l_agr_wait" + sfx, {TaBuilder::clock_le(z, W1)});
        int lw = b.loc("l_wait_suc" + sfx);
        {
            auto& e = b.edge(idle, lv, "leave request");
            e.channel = ch.id(chan("leave_r", i));
            e.resets = {z};
        }
        {
            auto& e = b.edge(lv, lw, "leave agreement");
            e.channel = ch.id(chan("leave_agr", i));
            e.send = true;
            e.guard = {TaBuilder::clock_eq(z, W1)};
        }
        // rear member leaves: the rear rolls back to its predecessor
        {
            auto& e = b.edge(lw, idle, "left (was rear)");
            e.channel = ch.id(chan("left_suc", i));
            e.guard = {TaBuilder::var_eq(rear, i)};
            e.updates = {{rear, true, pred[i]}, {pred[i], false, 0}};
        }
        // mid-platoon member leaves: its successor inherits the predecessor
        for (int j = 2; j <= cfg.followers; ++j) {
            if (j == i) continue;
            auto& e = b.edge(lw, idle, "left (mid platoon)");
            e.channel = ch.id(chan("left_suc", i));
            e.guard = {TaBuilder::var_eq(rear, j)};
            e.updates = {{pred[j], true, pred[i]}, {pred[i], false, 0}};
        }
    }

    return b.ta;
}

TimedNet build_platoon_net(const PlatoonNetConfig& cfg) {
    cfg.durations.validate();
    if (cfg.followers < 2) throw ConfigError("platoon net needs at least two followers");
    TimedNet net;
    net.name = "platoon";
    net.channels = platoon_channels(cfg.followers).names;
    net.automata.push_back(build_leader(cfg));
    for (int i = 1; i <= cfg.followers; ++i) {
        AgentOptions opts;
        opts.initially_member = (i == 1);
        opts.can_join = (i != 1);
        opts.can_leave = (i == 2);
        net.automata.push_back(build_agent(i, cfg, opts));
        net.automata.push_back(build_vehicle(i, cfg));
    }
    net.validate();
    return net;
}

std::vector<TimedProperty> platoon_property_suite(const PlatoonNetConfig& cfg) {
    std::vector<TimedProperty> out;

    auto a3_rdy = StatePred::loc("a3", "rdy_ch_lane");
    auto front2 = StatePred::var_cmp("l", "front", CmpOp::Eq, 2);
    auto a2_incr = StatePred::var_cmp("a2", "incr_spacing", CmpOp::Eq, 1);
    auto a2_done = StatePred::var_cmp("a2", "spacing_done", CmpOp::Eq, 1);

    TimedProperty p1;
    p1.name = "spacing_before_lane_change";
    p1.kind = TimedProperty::Kind::Invariant;
    p1.lhs = StatePred::imply(StatePred::conj(a3_rdy, front2), StatePred::conj(a2_incr, a2_done));
    p1.rhs = StatePred::truth();
    out.push_back(p1);

    TimedProperty p2;
    p2.name = "request_leads_to_spacing";
    p2.kind = TimedProperty::Kind::LeadsTo;
    p2.lhs = StatePred::conj(StatePred::loc("a3", "wait_j_agr"), front2);
    p2.rhs = StatePred::conj(a2_incr, a2_done);
    out.push_back(p2);

    TimedProperty p3;
    p3.name = "spacing_restored_after_join";
    p3.kind = TimedProperty::Kind::Invariant;
    p3.lhs = StatePred::imply(
        StatePred::conj(StatePred::loc("a3", "join_completed"), front2),
        StatePred::conj(StatePred::negation(a2_incr), a2_done));
    p3.rhs = StatePred::truth();
    out.push_back(p3);

    TimedProperty p4;
    p4.name = "join_time_window";
    p4.kind = TimedProperty::Kind::Invariant;
    p4.lhs = StatePred::imply(
        StatePred::loc("a2", "join_completed"),
        StatePred::conj(
            StatePred::var_cmp("a2", "process_time", CmpOp::Ge, cfg.join_total_lo()),
            StatePred::var_cmp("a2", "process_time", CmpOp::Le, cfg.join_total_hi())));
    p4.rhs = StatePred::truth();
    out.push_back(p4);

    TimedProperty p5;
    p5.name = "leave_time_window";
    p5.kind = TimedProperty::Kind::Invariant;
    p5.lhs = StatePred::imply(
        StatePred::loc("a2", "leave_completed"),
        StatePred::conj(
            StatePred::var_cmp("a2", "process_time", CmpOp::Ge, cfg.leave_total_lo()),
            StatePred::var_cmp("a2", "process_time", CmpOp::Le, cfg.leave_total_hi())));
    p5.rhs = StatePred::truth();
    out.push_back(p5);

    return out;
}

}  // namespace plv
