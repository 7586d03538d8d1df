#pragma once

#include <string>

#include "plv/platoon.hpp"
#include "plv/platoon_timed.hpp"

namespace plv {

// JSON scenario files: agent program (built-in name or path), initial-state
// overrides, environment profile, spacing constants. Schema documented in
// docs/file-formats.md.
CheckScenario load_scenario(const std::string& path);
CheckScenario scenario_from_json_text(const std::string& text, const std::string& base_dir);

// Duration-table override files for the timed models.
PlatoonNetConfig load_net_config(const std::string& durations_path);
PlatoonNetConfig net_config_from_json_text(const std::string& text);

}  // namespace plv
