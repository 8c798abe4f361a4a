#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "uwsn/engine.hpp"

namespace uwsn {

/// Scenario files group `key = value` lines under `[section]` headers:
///
///   [topology]
///   kind = grid
///   side = 10
///   [data]
///   f_k = 6
///
/// `#` starts a comment. Every key is optional and falls back to the
/// ScenarioConfig default.
ScenarioConfig parse_scenario(std::istream& in);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Sets one `section.key` entry from its text form; throws invalid_config.
void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value);

/// All recognised `section.key` names, in canonical order.
std::vector<std::string> config_keys();

/// Canonical text form: every key, fixed order, shortest round-trip numbers.
std::string serialize_scenario(const ScenarioConfig& config, bool include_seeds = true);

/// 16 hex digits identifying everything but the seed list.
std::string config_hash(const ScenarioConfig& config);

/// Accepts comma-separated seeds and inclusive ranges such as `1..200`.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
std::string format_seed_list(const std::vector<std::uint64_t>& seeds);

/// Shortest text that parses back to the same double.
std::string format_number(double value);

}  // namespace uwsn
