#include "plv/env.hpp"

#include <algorithm>
#include <map>

#include "plv/diagnostics.hpp"

namespace plv {

namespace {
bool pattern_matches(const Term& pattern, const Term& concrete) {
    return unify(pattern, concrete).has_value();
}
}  // namespace

bool EnvAutomaton::owns_action(const Term& action) const {
    for (const Term& p : action_alphabet)
        if (pattern_matches(p, action)) return true;
    return false;
}

bool EnvAutomaton::owns_message(const Term& content) const {
    for (const Term& p : message_alphabet)
        if (pattern_matches(p, content)) return true;
    return false;
}

std::vector<int> EnvAutomaton::consuming_edges(int loc, const Term& observable,
                                               bool is_message) const {
    std::vector<int> out;
    auto kind = is_message ? EnvEdge::Kind::ConsumeMessage : EnvEdge::Kind::ConsumeAction;
    for (size_t i = 0; i < edges.size(); ++i) {
        const EnvEdge& e = edges[i];
        if (e.src != loc || e.kind != kind) continue;
        if (pattern_matches(e.pattern, observable)) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> EnvAutomaton::output_edges(int loc) const {
    std::vector<int> out;
    for (size_t i = 0; i < edges.size(); ++i) {
        const EnvEdge& e = edges[i];
        if (e.src != loc) continue;
        if (e.kind == EnvEdge::Kind::Grant || e.kind == EnvEdge::Kind::Retract)
            out.push_back(static_cast<int>(i));
    }
    return out;
}

void EnvAutomaton::validate() const {
    for (const EnvEdge& e : edges) {
        if ((e.kind == EnvEdge::Kind::Grant || e.kind == EnvEdge::Kind::Retract) &&
            !e.pattern.ground())
            throw ConfigError(name + ": grant/retract pattern not ground: " + e.pattern.str());
        if (e.src < 0 || e.src >= static_cast<int>(locations.size()) || e.dst < 0 ||
            e.dst >= static_cast<int>(locations.size()))
            throw ConfigError(name + ": edge endpoint out of range");
    }
    auto check_enabled = [&](const Term& pattern, EnvEdge::Kind kind) {
        for (int loc = 0; loc < static_cast<int>(locations.size()); ++loc) {
            bool ok = false;
            for (const EnvEdge& e : edges) {
                if (e.src != loc || e.kind != kind) continue;
                if (unify(e.pattern, pattern)) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                throw ConfigError(name + ": location '" + locations[loc] + "' cannot consume " +
                                  pattern.str());
        }
    };
    for (const Term& p : action_alphabet) check_enabled(p, EnvEdge::Kind::ConsumeAction);
    for (const Term& p : message_alphabet) check_enabled(p, EnvEdge::Kind::ConsumeMessage);
}

// The component machines must own pairwise non-overlapping alphabets, so
// every consume edge lifts to a product edge where only its owner moves.
EnvAutomaton env_product(const std::string& name, const std::vector<EnvAutomaton>& machines) {
    for (const EnvAutomaton& m : machines) m.validate();
    size_t k = machines.size();
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            for (const Term& a : machines[i].action_alphabet)
                for (const Term& b : machines[j].action_alphabet)
                    if (unify(a, b))
                        throw ConfigError("env_product: machines '" + machines[i].name +
                                          "' and '" + machines[j].name +
                                          "' both own action " + a.str());
            for (const Term& a : machines[i].message_alphabet)
                for (const Term& b : machines[j].message_alphabet)
                    if (unify(a, b))
                        throw ConfigError("env_product: machines '" + machines[i].name +
                                          "' and '" + machines[j].name +
                                          "' both own message " + a.str());
        }
    }

    EnvAutomaton out;
    out.name = name;

    std::map<std::vector<int>, int> index;
    std::vector<std::vector<int>> tuples;
    auto intern = [&](const std::vector<int>& t) {
        auto it = index.find(t);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(tuples.size());
        index[t] = id;
        tuples.push_back(t);
        std::string label;
        for (size_t i = 0; i < k; ++i) {
            if (i) label += "|";
            label += machines[i].locations[t[i]];
        }
        out.locations.push_back(label);
        return id;
    };

    std::vector<int> init(k);
    for (size_t i = 0; i < k; ++i) init[i] = machines[i].initial;
    out.initial = intern(init);

    for (const EnvAutomaton& m : machines) {
        for (const Term& t : m.action_alphabet) out.action_alphabet.push_back(t);
        for (const Term& t : m.message_alphabet) out.message_alphabet.push_back(t);
    }

    // Reachable product; every component edge lifts with the others fixed.
    for (size_t qi = 0; qi < tuples.size(); ++qi) {
        std::vector<int> here = tuples[qi];
        for (size_t i = 0; i < k; ++i) {
            for (const EnvEdge& e : machines[i].edges) {
                if (e.src != here[i]) continue;
                std::vector<int> nxt = here;
                nxt[i] = e.dst;
                EnvEdge pe = e;
                pe.src = static_cast<int>(qi);
                pe.dst = intern(nxt);
                pe.name = machines[i].name + ":" + e.name;
                out.edges.push_back(pe);
            }
        }
    }

    out.validate();
    return out;
}

}  // namespace plv
