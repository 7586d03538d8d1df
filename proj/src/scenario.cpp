#include "plv/scenario.hpp"

#include <json.hpp>

#include "plv/agent_syntax.hpp"
#include "plv/report.hpp"

namespace plv {

namespace {

EnvProfile profile_from_json(const nlohmann::json& j) {
    EnvProfile p;
    std::string def = j.value("default", "may");
    auto parse_grant = [](const std::string& s) {
        if (s == "may") return EnvProfile::Grant::May;
        if (s == "must") return EnvProfile::Grant::Must;
        if (s == "never") return EnvProfile::Grant::Never;
        throw ConfigError("profile grant must be may/must/never, got '" + s + "'");
    };
    if (def == "must")
        p = EnvProfile::must_all();
    else if (def != "may")
        throw ConfigError("profile default must be may or must");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "default") continue;
        p.set(it.key(), parse_grant(it.value().get<std::string>()));
    }
    return p;
}

}  // namespace

CheckScenario scenario_from_json_text(const std::string& text, const std::string& base_dir) {
    nlohmann::json j = nlohmann::json::parse(text);
    CheckScenario s;
    s.name = j.value("name", "scenario");

    if (j.contains("spacing")) {
        s.spacing.increase = j["spacing"].value("increase", 17);
        s.spacing.normal = j["spacing"].value("normal", 5);
    }

    std::string program = j.value("program", "follower");
    if (program == "follower")
        s.program = follower_program(s.spacing);
    else if (program == "leader")
        s.program = leader_program(s.spacing);
    else {
        std::string path = program;
        if (!path.empty() && path[0] != '/' && !base_dir.empty())
            path = base_dir + "/" + path;
        s.program = parse_program(read_file(path));
    }

    if (j.contains("profile")) s.profile = profile_from_json(j["profile"]);
    s.member_start = j.value("member_start", false);
    if (j.contains("beliefs"))
        for (const auto& b : j["beliefs"]) s.extra_beliefs.push_back(Term::parse(b.get<std::string>()));
    if (j.contains("goals")) {
        s.replace_goals = j.value("replace_goals", false);
        for (const auto& g : j["goals"]) {
            std::string text_g = g.get<std::string>();
            GoalKind kind = GoalKind::Achieve;
            auto mark = text_g.find('!');
            if (auto pos = text_g.find(" [perform]"); pos != std::string::npos) {
                kind = GoalKind::Perform;
                text_g = text_g.substr(0, pos);
            } else if (auto pos2 = text_g.find(" [achieve]"); pos2 != std::string::npos) {
                text_g = text_g.substr(0, pos2);
            }
            (void)mark;
            s.goal_overrides.emplace_back(Term::parse(text_g), kind);
        }
    } else {
        s.replace_goals = j.value("replace_goals", false);
    }

    // keep the member-phase services out of join scenarios unless asked for
    if (!s.profile.grants.count("set_space_cmd"))
        s.profile.never("set_space_cmd");
    if (!s.profile.grants.count("leave_wish")) s.profile.never("leave_wish");
    return s;
}

CheckScenario load_scenario(const std::string& path) {
    std::string base;
    auto slash = path.find_last_of('/');
    if (slash != std::string::npos) base = path.substr(0, slash);
    return scenario_from_json_text(read_file(path), base);
}

PlatoonNetConfig net_config_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PlatoonNetConfig cfg;
    auto window = [&](const char* key, int& lo, int& hi) {
        if (!j.contains(key)) return;
        lo = j[key].at(0).get<int>();
        hi = j[key].at(1).get<int>();
    };
    window("change_lane", cfg.durations.change_lane_lo, cfg.durations.change_lane_hi);
    window("set_space", cfg.durations.set_space_lo, cfg.durations.set_space_hi);
    window("join_distance", cfg.durations.join_distance_lo, cfg.durations.join_distance_hi);
    if (j.contains("leader_waits")) {
        cfg.waits.pre_agreement = j["leader_waits"].value("pre_agreement", 10);
        cfg.waits.pre_confirmation = j["leader_waits"].value("pre_confirmation", 10);
    }
    cfg.lane_can_fail = j.value("lane_can_fail", true);
    cfg.durations.validate();
    return cfg;
}

PlatoonNetConfig load_net_config(const std::string& durations_path) {
    return net_config_from_json_text(read_file(durations_path));
}

}  // namespace plv
