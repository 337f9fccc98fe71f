#pragma once

#include <filesystem>
#include <string>

#include "oran/config.hpp"

namespace oran {

/// Parses, fills defaults and validates. Unknown keys, wrong types and broken
/// invariants raise ConfigError naming the JSON path (e.g. "agent.td3.actor_lr").
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Every field written explicitly; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& cfg);
void save_scenario(const std::filesystem::path& path, const ScenarioConfig& cfg);

}  // namespace oran
