#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "uwsn/engine.hpp"
#include "uwsn/report.hpp"

namespace uwsn {

/// 10x10 grid, 100 m spacing, 600 s trips, one Manhattan attacker at
/// 10 m/s with 20 s per node, f_k = 6, f_d = 3.
ScenarioConfig reference_grid_config();

/// 50 nodes on a line, swept end to end; synthetic stand-in for a corridor
/// testbed. Every node originates one datum and collection is disabled, so
/// only attack rounds count.
ScenarioConfig corridor_config();

/// 10 x 5 grid walked by a Manhattan attacker; synthetic stand-in for a grid
/// testbed. Same data and collection setup as the corridor.
ScenarioConfig block_config();

struct PresetOptions {
  std::size_t seeds = 0;  // 0: preset default
  unsigned jobs = 1;
  std::vector<std::pair<std::string, std::string>> overrides;  // applied to the base config
};

struct PresetOutput {
  std::string name;
  ScenarioConfig base;
  std::vector<Table> tables;
  std::vector<std::string> summary;
  std::vector<std::string> notes;
};

std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);

/// Runs a named preset. Throws invalid_argument for unknown names.
PresetOutput run_preset(const std::string& name, const PresetOptions& options = {});

/// Sink-side routing cost of one collection trip in which every node
/// originates one datum placed by `config.strategy`, per protocol.
std::map<Protocol, OverheadLedger> routing_load(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace uwsn
