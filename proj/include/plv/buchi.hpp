#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plv/formula.hpp"

namespace plv {

// Nondeterministic Büchi automaton over truth assignments to a fixed atom
// list. Edge guards are three-valued per atom: required true, required false,
// or don't-care.
struct BuchiAutomaton {
    struct Edge {
        int target = 0;
        std::vector<int8_t> guard;  // +1 true, -1 false, 0 don't-care; size == atoms.size()
    };

    std::vector<ModalAtom> atoms;
    std::vector<std::vector<Edge>> edges;  // indexed by source state
    std::vector<int> initial;
    std::vector<bool> accepting;

    int state_count() const { return static_cast<int>(edges.size()); }

    static bool guard_satisfied(const std::vector<int8_t>& guard,
                                const std::vector<bool>& valuation) {
        for (size_t i = 0; i < guard.size(); ++i) {
            if (guard[i] > 0 && !valuation[i]) return false;
            if (guard[i] < 0 && valuation[i]) return false;
        }
        return true;
    }

    std::string str() const;
};

// Tableau translation (node splitting on the negation normal form, then
// degeneralization of the per-until acceptance sets). The node bound guards
// against formula blow-up; exceeding it raises BoundError.
BuchiAutomaton ltl_to_buchi(const Formula& f, int node_bound = 4096);

}  // namespace plv
