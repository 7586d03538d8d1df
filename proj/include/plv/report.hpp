#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plv/abstraction.hpp"
#include "plv/checker.hpp"
#include "plv/timed_check.hpp"

namespace plv {

// Batch run report shared by the CLI subcommands. Exit status: 0 when every
// requested property holds, 1 when any fails, 2 on error/inconclusive.
struct RunReport {
    struct Property {
        std::string name;
        std::string formula;
        std::string verdict;  // "holds" | "fails" | "inconclusive"
        uint64_t states = 0;
        double wall_ms = 0;
        std::string counterexample;  // rendered; empty when none
    };

    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;  // (path or tag, content hash)
    std::vector<Property> properties;
    uint64_t total_states = 0;
    double total_wall_ms = 0;
    int exit_status = 0;

    void add(Property p);
    void finalize();

    std::string to_text() const;
    std::string to_json() const;
};

// FNV-1a over file bytes, rendered as "fnv1a:<hex>".
std::string content_hash(const std::string& bytes);
std::string file_hash(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

RunReport::Property to_report(const std::string& name, const Verdict& v,
                              const std::vector<ModalAtom>& atoms);
RunReport::Property to_report(const std::string& name, const TimedVerdict& v);

std::string composed_report_json(const ComposedReport& report);

}  // namespace plv
