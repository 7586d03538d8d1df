#pragma once

#include <cstdint>
#include <vector>

#include <functional>

#include "plv/buchi.hpp"
#include "plv/checker.hpp"
#include "plv/formula.hpp"

namespace plvtest {

// Direct bounded-lasso semantics for modal-LTL, evaluated on the surface
// formula by structural recursion and fixpoints. Deliberately independent of
// the NNF/tableau pipeline it is used to check.
class LassoOracle {
public:
    explicit LassoOracle(const plv::Formula& f);

    const std::vector<plv::ModalAtom>& atoms() const { return atoms_; }

    // letters[i] bit j == truth of atoms()[j] at position i; positions
    // [split, n) repeat forever.
    bool holds(const uint32_t* letters, int n, int split) const;

private:
    struct Node {
        plv::Formula::Kind kind;
        int lhs = -1, rhs = -1;
        int atom = -1;
    };
    int intern(const plv::Formula& f);

    std::vector<Node> nodes_;
    std::vector<plv::Formula> formulas_;
    std::vector<plv::ModalAtom> atoms_;
    int root_ = -1;
};

// Membership of ultimately periodic words in a Buchi automaton, limited to
// automata with at most 32 states. Guards are compiled to per-letter
// successor tables over a caller-fixed atom order. Exposes an incremental
// interface so an enumeration can share prefix/cycle work.
class BuchiMatcher {
public:
    static constexpr int kMaxStates = 32;

    // Whole-cycle transition relation with an acceptance-seen flag.
    struct Rel {
        uint32_t all[kMaxStates];
        uint32_t acc[kMaxStates];
    };

    BuchiMatcher(const plv::BuchiAutomaton& a, const std::vector<plv::ModalAtom>& atom_order);

    uint32_t initial_mask() const { return initial_; }
    uint32_t step_set(uint32_t set, uint32_t letter) const;

    void rel_identity(Rel& r) const;
    void rel_step(const Rel& in, uint32_t letter, Rel& out) const;

    // True iff some state in `reach` lies on a cycle of whole-cycle passes
    // containing at least one accepting pass.
    bool rel_accepts(uint32_t reach, const Rel& r) const;

    bool accepts(const std::vector<uint32_t>& letters, int split) const;

    int states() const { return nstates_; }

private:
    size_t k_;
    uint32_t initial_ = 0;
    uint32_t accepting_ = 0;
    int nstates_ = 0;
    std::vector<std::vector<uint32_t>> succ_;  // [letter][state]
};

struct AgreementResult {
    uint64_t lassos = 0;
    uint64_t mismatches = 0;
    std::vector<uint32_t> first_bad;  // letters of the first mismatching lasso
    int first_bad_split = -1;
};

// Enumerates every lasso with |prefix| + |cycle| <= max_total over the
// formula's atoms and compares the direct semantics against membership in
// ltl_to_buchi(f) and ltl_to_buchi(~f).
AgreementResult check_lasso_agreement(const plv::Formula& f, int max_total);

}  // namespace plvtest

namespace plvtest {

// Obvious-by-construction accepting-lasso existence: for every accepting
// node, test whether it can reach itself again (lasso = BFS path + cycle).
bool brute_accepting(const plv::ProductGraph& p);

// Fair-lasso existence by brute subset enumeration (products up to 20
// nodes): some reachable, strongly-connected, accepting subset in which
// every weak-fairness obligation is disabled somewhere or discharged by an
// internal edge.
bool brute_fair_accepting(const plv::ProductGraph& p, const plv::SystemGraph& g,
                          const plv::ComposedSystem& sys);

// Test fixture surgery: drops the first positive belief guard with the given
// functor from the first plan satisfying the predicate.
plv::AgentProgram delete_guard(
    plv::AgentProgram program,
    const std::function<bool(const plv::Plan&)>& plan_pred, const std::string& functor);

}  // namespace plvtest
