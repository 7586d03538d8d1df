#pragma once

#include <string>
#include <vector>

#include "plv/timed.hpp"
#include "plv/timed_props.hpp"

namespace plv {

// Inclusive completion windows for the vehicle tasks, in seconds.
struct DurationTable {
    int change_lane_lo = 15, change_lane_hi = 25;
    int set_space_lo = 5, set_space_hi = 15;
    int join_distance_lo = 5, join_distance_hi = 15;

    void validate() const;
};

// Leader processing delays. These close the gap between the raw task sums
// and the published join/leave completion windows; they are configuration,
// not physics.
struct LeaderWaits {
    int pre_agreement = 10;
    int pre_confirmation = 10;
};

struct PlatoonNetConfig {
    DurationTable durations;
    LeaderWaits waits;
    bool lane_can_fail = true;  // change-lane may blow its window
    int followers = 3;          // a1..aN; a1 starts as the platoon anchor

    // Derived bounds.
    int ack_timeout() const;      // leader's bounded wait for the join ack
    int join_total_lo() const;    // minimal request-to-confirmation time
    int join_total_hi() const;
    int leave_total_lo() const;
    int leave_total_hi() const;
};

// Vehicle i: services change-lane / set-space / join-distance commands over
// its three channel pairs with one clock; change-lane may fail silently.
TimedAutomaton build_vehicle(int i, const PlatoonNetConfig& cfg);

struct AgentOptions {
    bool initially_member = false;
    bool can_join = true;
    bool can_leave = true;
};

// Agent i: idle hub plus the join / leave / set-space / steering-switch
// regions; decision locations are urgent (helper clock u), wait locations
// are unconstrained; process_time measures goal start to completion.
TimedAutomaton build_agent(int i, const PlatoonNetConfig& cfg, const AgentOptions& opts);

// Leader: serves one request at a time; join choreography dispatches on the
// current rear member, opens the gap, grants the agreement after a fixed
// processing wait, waits boundedly for the acknowledgement, restores
// spacing, then confirms (or times out and restores spacing).
TimedAutomaton build_leader(const PlatoonNetConfig& cfg);

// The shipped 1-leader / 3-follower network: a1 is a member anchor, a2 may
// join then leave, a3 may join. All joins use the spacing choreography.
TimedNet build_platoon_net(const PlatoonNetConfig& cfg = {});

// The five shipped timed properties, with completion windows derived from
// the configuration (defaults give the published bounds).
std::vector<TimedProperty> platoon_property_suite(const PlatoonNetConfig& cfg = {});

}  // namespace plv
