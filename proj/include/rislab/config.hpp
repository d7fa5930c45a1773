#pragma once

#include <string>
#include <vector>

#include "rislab/errors.hpp"
#include "rislab/experiments.hpp"

namespace rislab {

// Sectioned key-value (INI) scenario files. Missing keys keep their defaults;
// unknown sections or keys are rejected. A [legit_schedule] or
// [attacker_schedule] section with switch_period_s enables that RIS schedule.
ScenarioConfig parse_config_string(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

struct ConfigEntry {
    std::string section;
    std::string key;
    std::string value;
};

std::vector<ConfigEntry> config_entries(const ScenarioConfig& config);

// Emits every field; parse_config_string(to_config_string(c)) == c.
std::string to_config_string(const ScenarioConfig& config);

}  // namespace rislab
