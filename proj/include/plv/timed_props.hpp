#pragma once

#include <memory>
#include <string>
#include <vector>

#include "plv/timed.hpp"

namespace plv {

// State predicate over a timed net: location membership, variable and clock
// comparisons, boolean connectives.
class StatePred {
public:
    enum class Kind { True, Loc, ClockCmp, VarCmp, Not, And, Or, Imply };

    StatePred() : StatePred(truth()) {}

    static StatePred truth();
    static StatePred loc(std::string automaton, std::string location);
    static StatePred clock_cmp(std::string automaton, std::string clock, CmpOp op, int bound);
    static StatePred var_cmp(std::string automaton, std::string var, CmpOp op, int bound);
    static StatePred negation(StatePred p);
    static StatePred conj(StatePred a, StatePred b);
    static StatePred disj(StatePred a, StatePred b);
    static StatePred imply(StatePred a, StatePred b);

    Kind kind() const;
    std::string str() const;

    // Evaluates against a configuration; names resolve against the net on
    // each use. Location atoms match names and aliases.
    bool eval(const NetSemantics& sem, const TimedConfig& c) const;

    // Clock constants referenced by the predicate, per automaton/clock; used
    // to keep the cap above property bounds.
    void collect_clock_consts(const TimedNet& net, std::vector<std::vector<int>>& out) const;

    // Multiplies clock-comparison bounds (digitization scaling); the net
    // resolves which compared names are clocks.
    StatePred scaled(const TimedNet& net, int k) const;

private:
    struct Node;
    explicit StatePred(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct TimedProperty {
    enum class Kind { Invariant, LeadsTo };
    std::string name;
    Kind kind = Kind::Invariant;
    StatePred lhs;  // A[] lhs   |   lhs --> rhs
    StatePred rhs;

    std::string str() const;
    TimedProperty scaled(const TimedNet& net, int k) const;
};

// Property syntax:  `A[] <pred>`  or  `<pred> --> <pred>`.
// Predicates: `a3.rdy_ch_lane`, `l.front == 2`, `a2.process_time >= 50`,
// `!p`, `p && q`, `p || q`, `p imply q`, parentheses.
TimedProperty parse_timed_property(const std::string& name, const std::string& text);

// One property per line, `name = property`, '#' comments.
std::vector<TimedProperty> parse_timed_property_file(const std::string& text,
                                                     const std::string& stem);

}  // namespace plv
