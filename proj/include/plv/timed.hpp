#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plv/diagnostics.hpp"

namespace plv {

enum class CmpOp { Le, Ge, Eq };

std::string to_string(CmpOp op);

// One conjunct of a guard: a clock or an integer variable compared against a
// nonnegative constant. Clock constraints are closed (<=, >=, ==), which is
// what makes unit-delay digitization verdict-preserving.
struct GuardAtom {
    bool is_clock = true;
    int id = 0;  // automaton-local clock or variable index
    CmpOp op = CmpOp::Le;
    int bound = 0;
};

struct VarUpdate {
    int var = 0;
    bool from_var = false;  // copy another variable instead of a constant
    int value = 0;          // constant, or source variable index
};

struct TimedEdge {
    int src = 0;
    int dst = 0;
    std::vector<GuardAtom> guard;
    int channel = -1;  // -1: internal
    bool send = false;
    std::string action;  // label for traces
    std::vector<int> resets;
    std::vector<VarUpdate> updates;
};

struct TimedLocation {
    std::string name;
    std::vector<std::string> aliases;  // extra names usable in properties
    std::vector<GuardAtom> invariant;  // clock conjuncts only
};

struct TimedAutomaton {
    std::string name;
    std::vector<TimedLocation> locations;
    int initial = 0;
    std::vector<std::string> clocks;
    std::vector<std::string> vars;
    std::vector<int> var_init;
    std::vector<TimedEdge> edges;

    int loc_index(const std::string& n) const;      // name or alias; -1 if absent
    int clock_index(const std::string& n) const;    // -1 if absent
    int var_index(const std::string& n) const;      // -1 if absent
    void validate() const;
};

// Network of timed automata with binary (one sender, one receiver) channel
// synchronization and unit-delay integer-time semantics.
struct TimedNet {
    std::string name;
    std::vector<TimedAutomaton> automata;
    std::vector<std::string> channels;

    int automaton_index(const std::string& n) const;
    int channel_index(const std::string& n) const;
    void validate() const;

    // Largest constant each clock is compared against anywhere in the net.
    std::vector<std::vector<int>> clock_max_consts() const;
};

// All clock bounds multiplied by k (variables untouched); used by the
// digitization robustness checks.
TimedNet scale_clock_constants(const TimedNet& net, int k);

// Global configuration: one location per automaton, capped integer clock
// valuation, variable valuation. Packed flat for hashing.
struct TimedConfig {
    std::vector<int32_t> data;
    bool operator==(const TimedConfig&) const = default;
};

struct NetLayout {
    explicit NetLayout(const TimedNet& net);

    int loc_offset(int automaton) const { return automaton; }
    int clock_offset(int automaton, int clock) const {
        return clock_base[automaton] + clock;
    }
    int var_offset(int automaton, int var) const { return var_base[automaton] + var; }
    int size() const { return total; }

    int n_automata = 0;
    std::vector<int> clock_base;
    std::vector<int> var_base;
    int total = 0;
};

struct TimedLabel {
    enum class Kind { Delay, Internal, Sync };
    Kind kind = Kind::Delay;
    int automaton = -1;
    int edge = -1;
    int partner_automaton = -1;
    int partner_edge = -1;

    bool operator==(const TimedLabel&) const = default;
};

// Uniform interface used by the reachability algorithms.
class NetSemantics {
public:
    // caps: per-automaton per-clock saturation value (max constant + extra).
    NetSemantics(const TimedNet& net, int cap_extra = 1,
                 const std::vector<std::vector<int>>& extra_consts = {});

    const TimedNet& net() const { return *net_; }
    const NetLayout& layout() const { return layout_; }

    TimedConfig initial() const;
    bool invariants_hold(const TimedConfig& c) const;
    std::vector<std::pair<TimedLabel, TimedConfig>> successors(const TimedConfig& c) const;

    std::string describe(const TimedLabel& l) const;
    std::string describe(const TimedConfig& c) const;

    int clock_value(const TimedConfig& c, const std::string& automaton,
                    const std::string& clock) const;

private:
    bool guard_holds(int automaton, const std::vector<GuardAtom>& guard,
                     const TimedConfig& c) const;
    bool location_inv_holds(int automaton, int loc, const TimedConfig& c) const;
    void apply_edge(int automaton, const TimedEdge& e, TimedConfig& c) const;

    const TimedNet* net_;
    NetLayout layout_;
    std::vector<std::vector<int>> caps_;
};

}  // namespace plv
