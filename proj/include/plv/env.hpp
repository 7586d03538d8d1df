#pragma once

#include <string>
#include <vector>

#include "plv/term.hpp"

namespace plv {

// Untimed nondeterministic environment automaton. Edges either consume an
// observable the agent produced (an action or a sent message) or grant /
// retract a percept. Grant and retract edges may be marked `must`: a fair
// run cannot stay forever at a location whose must-edges are enabled without
// taking one.
struct EnvEdge {
    enum class Kind { ConsumeAction, ConsumeMessage, Grant, Retract };
    int src = 0;
    int dst = 0;
    Kind kind = Kind::Grant;
    Term pattern;  // ground for Grant/Retract
    bool must = false;
    std::string name;
    // Beliefs withdrawn atomically with a grant (mutually exclusive percepts).
    std::vector<Term> also_retract;
};

struct EnvAutomaton {
    std::string name;
    std::vector<std::string> locations;
    int initial = 0;
    std::vector<EnvEdge> edges;
    // Patterns this environment is responsible for consuming. Input
    // enabledness is validated against these.
    std::vector<Term> action_alphabet;
    std::vector<Term> message_alphabet;

    bool owns_action(const Term& action) const;
    bool owns_message(const Term& content) const;

    std::vector<int> consuming_edges(int loc, const Term& observable, bool is_message) const;
    std::vector<int> output_edges(int loc) const;  // grant/retract edges at loc

    // Checks that every alphabet pattern has a consuming edge at every
    // location, and that grant/retract patterns are ground.
    void validate() const;
};

// Synchronous product of several machines into one automaton. An action or
// message pattern owned by several machines moves all of them at once;
// grant/retract edges interleave.
EnvAutomaton env_product(const std::string& name, const std::vector<EnvAutomaton>& machines);

}  // namespace plv
