// uwsn: command-line front end for the dispersal simulator.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "uwsn/engine.hpp"
#include "uwsn/presets.hpp"
#include "uwsn/report.hpp"
#include "uwsn/scenario_file.hpp"

namespace fs = std::filesystem;
using namespace uwsn;

namespace {

enum Exit { ok = 0, runtime_failure = 1, config_invalid = 2 };

struct Common {
  std::string out;
  std::vector<std::string> sets;
  std::size_t seeds = 0;
  std::int64_t seed = -1;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Common& c, bool seeds = true) {
  cmd->add_option("--out", c.out, "Output directory (default: $UWSN_OUT_DIR or ./results)");
  cmd->add_option("--set", c.sets, "Override a setting, section.key=value (repeatable)");
  if (seeds) {
    cmd->add_option("--seeds", c.seeds, "Run seeds 1..N");
    cmd->add_option("--seed", c.seed, "Run a single seed");
  }
  cmd->add_option("--jobs,-j", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

fs::path out_dir(const Common& c, const std::string& fallback) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("UWSN_OUT_DIR"); env && *env) return fs::path(env) / fallback;
  return fs::path("results") / fallback;
}

std::vector<std::pair<std::string, std::string>> parse_sets(const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::invalid_config, "--set expects section.key=value, got '" + s + "'");
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return out;
}

ScenarioConfig load_config(const std::string& path, const Common& c,
                           std::vector<std::pair<std::string, std::string>>& overrides) {
  ScenarioConfig config = path.empty() ? ScenarioConfig{} : load_scenario(path);
  overrides = parse_sets(c.sets);
  for (const auto& [k, v] : overrides) set_config_value(config, k, v);
  if (c.seed >= 0) {
    config.seeds = {static_cast<std::uint64_t>(c.seed)};
    overrides.emplace_back("run.seeds", std::to_string(c.seed));
  } else if (c.seeds > 0) {
    config.seeds.clear();
    for (std::size_t i = 1; i <= c.seeds; ++i) config.seeds.push_back(i);
    overrides.emplace_back("run.seeds", format_seed_list(config.seeds));
  }
  config.validate();
  return config;
}

ReportMetadata metadata_for(const std::string& command, const ScenarioConfig& config,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  ReportMetadata m;
  m.command = command;
  m.config_hash = config_hash(config);
  m.seeds = config.seeds;
  m.overrides = overrides;
  m.scenario = serialize_scenario(config);
  return m;
}

void print_summary(const fs::path& dir, const std::vector<std::string>& lines) {
  for (const auto& l : lines) std::cout << l << '\n';
  std::cout << "wrote " << dir.string() << '\n';
}

int cmd_run(const std::string& path, const Common& c, std::size_t detail) {
  std::vector<std::pair<std::string, std::string>> overrides;
  const ScenarioConfig config = load_config(path, c, overrides);
  const SimulationReport report = run_scenario(config, c.jobs);
  const fs::path dir = out_dir(c, "run");
  const auto summary = scenario_summary(report);
  emit_report(dir, scenario_tables(report, detail), summary, metadata_for("run", config, overrides));
  print_summary(dir, summary);
  return ok;
}

int cmd_sweep(const std::string& path, const Common& c, const std::vector<std::string>& axis_args) {
  std::vector<std::pair<std::string, std::string>> overrides;
  const ScenarioConfig config = load_config(path, c, overrides);
  std::vector<SweepAxis> axes;
  for (const auto& a : axis_args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::invalid_config, "--axis expects section.key=v1,v2, got '" + a + "'");
    SweepAxis axis{a.substr(0, eq), {}};
    std::stringstream values(a.substr(eq + 1));
    for (std::string v; std::getline(values, v, ',');)
      if (!v.empty()) axis.values.push_back(v);
    ScenarioConfig probe = config;
    for (const auto& v : axis.values) set_config_value(probe, axis.key, v);
    axes.push_back(std::move(axis));
  }
  const auto cells = sweep(config, axes, c.jobs);
  const Table table = sweep_table(cells, axes);
  std::vector<std::string> summary;
  std::size_t failed = 0;
  for (const auto& cell : cells)
    if (!cell.report) ++failed;
  summary.push_back("cells " + std::to_string(cells.size()) + " failed " + std::to_string(failed));
  const fs::path dir = out_dir(c, "sweep");
  emit_report(dir, {table}, summary, metadata_for("sweep", config, overrides));
  std::cout << '\n';
  write_table_text(std::cout, table);
  print_summary(dir, summary);
  return failed == 0 ? ok : runtime_failure;
}

int cmd_preset(const std::string& name, const Common& c) {
  PresetOptions options;
  options.seeds = c.seeds;
  options.jobs = c.jobs;
  options.overrides = parse_sets(c.sets);
  const PresetOutput out = run_preset(name, options);
  ReportMetadata meta = metadata_for("preset " + name, out.base, options.overrides);
  meta.notes = out.notes;
  const fs::path dir = out_dir(c, name);
  emit_report(dir, out.tables, out.summary, meta);
  for (const auto& t : out.tables)
    if (t.raw.empty() && t.rows.size() <= 60) {
      write_table_text(std::cout, t);
      std::cout << '\n';
    }
  print_summary(dir, out.summary);
  return ok;
}

int cmd_topo(const std::string& path, const Common& c) {
  std::vector<std::pair<std::string, std::string>> overrides;
  const ScenarioConfig config = load_config(path, c, overrides);
  const Topology topology = build_topology(config.topology);
  const NetworkGraph graph = bootstrap_graph(config, topology, config.seeds.front());
  std::ostringstream topo, nodes, edges;
  write_topology(topo, topology);
  write_graph_nodes_csv(nodes, graph);
  write_graph_edges_csv(edges, graph);
  std::vector<Table> tables{{"graph_nodes", {}, {}, nodes.str()}, {"graph_edges", {}, {}, edges.str()}};
  if (auto clustering = make_clustering(config, graph, config.seeds.front())) {
    std::ostringstream clusters;
    write_clustering_csv(clusters, graph, *clustering);
    tables.push_back({"clusters", {}, {}, clusters.str()});
  }
  const fs::path dir = out_dir(c, "topo");
  std::vector<std::string> summary{"nodes " + std::to_string(topology.size()),
                                   "links " + std::to_string(topology.links().size()),
                                   "graph_edges " + std::to_string(graph.directed_edge_count()),
                                   "components " + std::to_string(topology.component_count())};
  emit_report(dir, tables, summary, metadata_for("topo", config, overrides));
  std::ofstream(dir / "topology.txt") << topo.str();
  print_summary(dir, summary);
  return ok;
}

int cmd_routes(const std::string& path, const Common& c, std::int64_t origin) {
  std::vector<std::pair<std::string, std::string>> overrides;
  const ScenarioConfig config = load_config(path, c, overrides);
  const std::uint64_t seed = config.seeds.front();
  const Topology topology = build_topology(config.topology);
  const NetworkGraph graph = bootstrap_graph(config, topology, seed);
  const auto clustering = make_clustering(config, graph, seed);
  std::vector<NodeId> origins = graph.ids();
  if (origin >= 0) origins = {static_cast<NodeId>(origin)};

  std::vector<PlacementPlan> plans;
  std::vector<SourceRoute> dsr_all, gpsr_all;
  std::map<NodeId, NextHopTable> aodv_all;
  std::map<Protocol, OverheadLedger> totals;
  for (NodeId o : origins) {
    if (!graph.contains(o)) throw Error(ErrorCode::unknown_node, "origin " + std::to_string(o) + " is not in the graph");
    const DataId id = static_cast<DataId>(graph.index_of(o));
    Rng rng = Rng::stream(seed, "placement", id);
    PlacementPlan plan =
        place_datum(config, graph, clustering ? &*clustering : nullptr, DataItem{id, o, config.f_k, config.f_d}, rng);
    const auto holders = plan.remote_holders();
    DsrResult dsr = dsr_routes(graph, o, holders, config.routing);
    AodvResult aodv = aodv_tables(graph, o, holders, config.routing);
    GpsrResult gpsr = gpsr_tables(graph, o, holders, config.routing);
    for (NodeId h : holders) {
      GpsrDelivery d = gpsr_deliver(graph, o, h);
      gpsr.ledger.hole_fallbacks += d.hole_fallbacks;
      gpsr_all.push_back(std::move(d.route));
    }
    dsr_all.insert(dsr_all.end(), dsr.routes.begin(), dsr.routes.end());
    for (auto& [node, table] : aodv.tables) {
      auto& merged = aodv_all[node];
      merged.owner = node;
      merged.entries.insert(table.entries.begin(), table.entries.end());
      merged.own_entries += table.own_entries;
      merged.forwarding_entries += table.forwarding_entries;
    }
    totals[Protocol::dsr].merge(dsr.ledger);
    totals[Protocol::aodv].merge(aodv.ledger);
    totals[Protocol::gpsr].merge(gpsr.ledger);
    plans.push_back(std::move(plan));
  }
  std::ostringstream placements, dsr_csv, aodv_csv, gpsr_csv, ledger_csv;
  write_plan_csv(placements, plans);
  write_routes_csv(dsr_csv, dsr_all);
  write_next_hop_csv(aodv_csv, aodv_all);
  write_routes_csv(gpsr_csv, gpsr_all);
  std::vector<std::pair<std::string, OverheadLedger>> ledgers;
  for (const auto& [p, l] : totals) ledgers.emplace_back(to_string(p), l);
  write_ledger_csv(ledger_csv, ledgers);
  const std::vector<Table> tables{{"placements", {}, {}, placements.str()},
                                  {"routes_dsr", {}, {}, dsr_csv.str()},
                                  {"next_hop_aodv", {}, {}, aodv_csv.str()},
                                  {"routes_gpsr", {}, {}, gpsr_csv.str()},
                                  {"ledger", {}, {}, ledger_csv.str()}};
  std::vector<std::string> summary;
  for (const auto& [name, l] : ledgers)
    summary.push_back(name + " instructions " + std::to_string(l.instruction_count) + " table_bytes_max " +
                      std::to_string(l.table_bytes_max()) + " hole_fallbacks " + std::to_string(l.hole_fallbacks));
  const fs::path dir = out_dir(c, "routes");
  emit_report(dir, tables, summary, metadata_for("routes", config, overrides));
  print_summary(dir, summary);
  return ok;
}

int cmd_validate(const std::string& path, const std::vector<std::string>& sets) {
  ScenarioConfig config = load_scenario(path);
  for (const auto& [k, v] : parse_sets(sets)) set_config_value(config, k, v);
  config.validate();
  std::cout << "ok " << config_hash(config) << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fragment dispersal simulator for unattended sensor networks"};
  app.set_version_flag("--version", std::string(UWSN_VERSION));
  app.require_subcommand(1);

  Common common;
  std::string scenario;

  auto* run = app.add_subcommand("run", "Run one scenario file over its seeds");
  run->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  std::size_t detail = 1;
  run->add_option("--detail", detail, "Seeds whose event logs and ledgers are written");
  add_common(run, common);

  auto* sw = app.add_subcommand("sweep", "Cartesian parameter sweep over a scenario");
  sw->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  std::vector<std::string> axes;
  sw->add_option("--axis", axes, "section.key=v1,v2,... (repeatable)")->required();
  add_common(sw, common);

  auto* preset = app.add_subcommand("preset", "Run a figure preset");
  std::string preset_name;
  bool list = false;
  preset->add_option("name", preset_name, "Preset name");
  preset->add_flag("--list", list, "List presets");
  add_common(preset, common, false);
  preset->add_option("--seeds", common.seeds, "Seeds 1..N (default: preset-specific)");

  auto* topo = app.add_subcommand("topo", "Write the topology and the sink's graph");
  topo->add_option("scenario", scenario, "Scenario file (defaults when omitted)")->check(CLI::ExistingFile);
  add_common(topo, common);

  auto* routes = app.add_subcommand("routes", "Dump placements, routes, tables, and ledgers");
  routes->add_option("scenario", scenario, "Scenario file (defaults when omitted)")->check(CLI::ExistingFile);
  std::int64_t origin = -1;
  routes->add_option("--origin", origin, "Only this origin node");
  add_common(routes, common);

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  std::vector<std::string> validate_sets;
  validate->add_option("--set", validate_sets, "Override a setting, section.key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_invalid;
  }

  try {
    if (*run) return cmd_run(scenario, common, detail);
    if (*sw) return cmd_sweep(scenario, common, axes);
    if (*preset) {
      if (list || preset_name.empty()) {
        for (const auto& n : preset_names()) std::cout << n << "  " << preset_description(n) << '\n';
        return preset_name.empty() && !list ? config_invalid : ok;
      }
      return cmd_preset(preset_name, common);
    }
    if (*topo) return cmd_topo(scenario, common);
    if (*routes) return cmd_routes(scenario, common, origin);
    if (*validate) return cmd_validate(scenario, validate_sets);
  } catch (const Error& e) {
    std::cerr << "uwsn: " << to_string(e.code()) << ": " << e.what() << '\n';
    const bool config = e.code() == ErrorCode::invalid_config || e.code() == ErrorCode::invalid_argument ||
                        e.code() == ErrorCode::malformed_record;
    return config ? config_invalid : runtime_failure;
  } catch (const std::exception& e) {
    std::cerr << "uwsn: " << e.what() << '\n';
    return runtime_failure;
  }
  return runtime_failure;
}
