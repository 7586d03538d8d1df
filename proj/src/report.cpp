#include "plv/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace plv {

void RunReport::add(Property p) {
    total_states += p.states;
    total_wall_ms += p.wall_ms;
    properties.push_back(std::move(p));
}

void RunReport::finalize() {
    exit_status = 0;
    for (const Property& p : properties) {
        if (p.verdict == "fails" && exit_status == 0) exit_status = 1;
        if (p.verdict == "inconclusive") exit_status = 2;
    }
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    os << "command: " << command << "\n";
    for (const auto& [path, hash] : inputs) os << "input: " << path << " " << hash << "\n";
    for (const Property& p : properties) {
        os << p.name << ": " << p.verdict << "  (states=" << p.states
           << ", wall_ms=" << static_cast<long>(p.wall_ms) << ")\n";
        if (!p.counterexample.empty()) {
            os << "  formula: " << p.formula << "\n";
            std::istringstream cex(p.counterexample);
            std::string line;
            while (std::getline(cex, line)) os << "  | " << line << "\n";
        }
    }
    os << "total: states=" << total_states << " wall_ms=" << static_cast<long>(total_wall_ms)
       << " exit=" << exit_status << "\n";
    return os.str();
}

std::string RunReport::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["inputs"] = nlohmann::json::array();
    for (const auto& [path, hash] : inputs) j["inputs"].push_back({{"path", path}, {"hash", hash}});
    j["properties"] = nlohmann::json::array();
    for (const Property& p : properties) {
        nlohmann::json pj;
        pj["name"] = p.name;
        pj["formula"] = p.formula;
        pj["verdict"] = p.verdict;
        pj["states"] = p.states;
        pj["wall_ms"] = p.wall_ms;
        if (p.counterexample.empty())
            pj["counterexample"] = nullptr;
        else
            pj["counterexample"] = p.counterexample;
        j["properties"].push_back(pj);
    }
    j["totals"] = {{"states", total_states}, {"wall_ms", total_wall_ms}};
    j["exit"] = exit_status;
    return j.dump(2) + "\n";
}

std::string content_hash(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << "fnv1a:" << std::hex << h;
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

std::string file_hash(const std::string& path) { return content_hash(read_file(path)); }

RunReport::Property to_report(const std::string& name, const Verdict& v,
                              const std::vector<ModalAtom>& atoms) {
    RunReport::Property p;
    p.name = name;
    p.formula = v.formula;
    p.verdict = v.holds ? "holds" : "fails";
    p.states = v.system_states;
    p.wall_ms = v.wall_ms;
    if (v.counterexample) p.counterexample = v.counterexample->render(atoms);
    return p;
}

RunReport::Property to_report(const std::string& name, const TimedVerdict& v) {
    RunReport::Property p;
    p.name = name;
    p.formula = v.property;
    p.verdict = v.holds ? "holds" : "fails";
    p.states = v.states;
    p.wall_ms = v.wall_ms;
    if (!v.holds) {
        std::ostringstream os;
        for (const auto& [label, config] : v.trace)
            os << (label.empty() ? "start" : label) << "\n  " << config << "\n";
        if (!v.cycle.empty()) {
            os << "cycle:\n";
            for (const auto& [label, config] : v.cycle) os << label << "\n  " << config << "\n";
        }
        if (v.deadlock) os << "(run ends in a dead configuration)\n";
        p.counterexample = os.str();
    }
    return p;
}

std::string composed_report_json(const ComposedReport& report) {
    nlohmann::json j;
    j["clauses"] = nlohmann::json::array();
    auto name = [](ComposedClause::Outcome o) {
        switch (o) {
            case ComposedClause::Outcome::Holds: return "holds";
            case ComposedClause::Outcome::Fails: return "fails";
            case ComposedClause::Outcome::Inconclusive: return "inconclusive";
        }
        return "?";
    };
    for (const ComposedClause& c : report.clauses) {
        j["clauses"].push_back({{"clause", c.id},
                                {"component", c.component},
                                {"property", c.property},
                                {"verdict", name(c.outcome)},
                                {"note", c.note},
                                {"states", c.states},
                                {"wall_ms", c.wall_ms}});
    }
    j["verdict"] = name(report.outcome);
    return j.dump(2) + "\n";
}

}  // namespace plv
