#include "uwsn/presets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "uwsn/scenario_file.hpp"
#include "uwsn/stats.hpp"

namespace uwsn {

ScenarioConfig reference_grid_config() {
  ScenarioConfig c;
  c.topology.kind = TopologyKind::grid;
  c.topology.side = 10;
  c.strategy = Strategy::fixed_distance;
  c.target_dfk = 6.0;
  return c;
}

ScenarioConfig corridor_config() {
  ScenarioConfig c;
  c.topology.kind = TopologyKind::line;
  c.topology.count = 50;
  c.trip_duration = 0.0;
  c.generation = Generation::per_node;
  c.attacker_model = AttackerModel::line_sweep;
  c.strategy = Strategy::clustered;
  return c;
}

ScenarioConfig block_config() {
  ScenarioConfig c;
  c.topology.kind = TopologyKind::rect;
  c.topology.cols = 10;
  c.topology.rows = 5;
  c.trip_duration = 0.0;
  c.generation = Generation::per_node;
  c.attacker_model = AttackerModel::manhattan;
  c.strategy = Strategy::clustered;
  return c;
}

std::map<Protocol, OverheadLedger> routing_load(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const Topology topology = build_topology(config.topology);
  const NetworkGraph graph = bootstrap_graph(config, topology, seed);
  const auto clustering = make_clustering(config, graph, seed);
  std::map<Protocol, OverheadLedger> out;
  DataId id = 0;
  for (NodeId origin : graph.ids()) {
    DataItem item{id, origin, config.f_k, config.f_d};
    Rng rng = Rng::stream(seed, "placement", id++);
    const PlacementPlan plan = place_datum(config, graph, clustering ? &*clustering : nullptr, item, rng);
    const auto holders = plan.remote_holders();
    out[Protocol::dsr].merge(dsr_routes(graph, origin, holders, config.routing).ledger);
    out[Protocol::aodv].merge(aodv_tables(graph, origin, holders, config.routing).ledger);
    out[Protocol::gpsr].merge(gpsr_tables(graph, origin, holders, config.routing).ledger);
  }
  return out;
}

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct Method {
  const char* name;
  Overrides overrides;
};

// The four placement series compared in the parameter sweeps.
const std::vector<Method>& sweep_methods() {
  static const std::vector<Method> methods = {
      {"near_first", {{"placement.strategy", "near_first"}}},
      {"random", {{"placement.strategy", "random"}}},
      {"dfk6", {{"placement.strategy", "fixed_distance"}, {"placement.target_dfk", "6"}}},
      {"dfk8", {{"placement.strategy", "fixed_distance"}, {"placement.target_dfk", "8"}}},
  };
  return methods;
}

std::vector<std::uint64_t> seed_range(std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = i + 1;
  return seeds;
}

SimulationReport run_cell(const ScenarioConfig& base, const Overrides& overrides, unsigned jobs) {
  ScenarioConfig config = base;
  for (const auto& [k, v] : overrides) set_config_value(config, k, v);
  return run_scenario(config, jobs);
}

std::string pct(const SimulationReport& r) { return format_cell(r.seizure_percentage()); }

struct Context {
  std::string name;
  ScenarioConfig base;
  std::size_t seeds;
  unsigned jobs;
  PresetOutput out;
};

void seizure_vs_dfk(Context& ctx) {
  Table t{"fig1a", {"dfk", "attackers", "seizure_pct"}, {}, {}};
  for (int attackers : {1, 2, 3})
    for (int dfk = 2; dfk <= 9; ++dfk) {
      auto r = run_cell(ctx.base,
                        {{"placement.strategy", "fixed_distance"},
                         {"placement.target_dfk", std::to_string(dfk)},
                         {"attacker.count", std::to_string(attackers)}},
                        ctx.jobs);
      t.rows.push_back({std::to_string(dfk), std::to_string(attackers), pct(r)});
    }
  const NetworkGraph graph = bootstrap_graph(ctx.base, build_topology(ctx.base.topology), 1);
  Rng rng = Rng::stream(1, "max_dfk");
  ctx.out.summary.push_back("max_dfk_hops " + format_cell(max_dfk_search(graph, ctx.base.f_k, rng)));
  ctx.out.tables.push_back(std::move(t));
}

void method_sweep(Context& ctx, const std::string& table, const std::vector<std::string>& columns,
                  const std::vector<Overrides>& points, const std::vector<std::vector<std::string>>& labels) {
  Table t{table, columns, {}, {}};
  t.header.push_back("method");
  t.header.push_back("seizure_pct");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (const auto& method : sweep_methods()) {
      Overrides o = points[i];
      o.insert(o.end(), method.overrides.begin(), method.overrides.end());
      auto r = run_cell(ctx.base, o, ctx.jobs);
      auto row = labels[i];
      row.push_back(method.name);
      row.push_back(pct(r));
      t.rows.push_back(std::move(row));
    }
  ctx.out.tables.push_back(std::move(t));
}

void energy_curve(Context& ctx) {
  const NetworkGraph graph = bootstrap_graph(ctx.base, build_topology(ctx.base.topology), 1);
  EnergySweepOptions options;
  options.f_k = ctx.base.f_k;
  options.f_d = ctx.base.f_d;
  options.placement.tolerance = ctx.base.dfk_tolerance;
  options.placement.cap = ctx.base.cap;
  const std::vector<double> targets{2, 3, 4, 5, 6, 7, 8, 9};
  const auto rows = energy_vs_dfk_sweep(graph, targets, ctx.base.radio, seed_range(ctx.seeds), options);
  Table t{"fig1f", {"target_dfk", "mean_ek", "stddev"}, {}, {}};
  std::vector<double> x, y;
  for (const auto& r : rows) {
    t.rows.push_back({format_cell(r.target_dfk), format_cell(r.mean_ek), format_cell(r.stddev)});
    x.push_back(r.target_dfk);
    y.push_back(r.mean_ek);
  }
  const auto fit = stats::linear_fit(x, y);
  ctx.out.summary.push_back("linear_fit slope " + format_cell(fit.slope) + " r_squared " + format_cell(fit.r_squared));
  ctx.out.tables.push_back(std::move(t));
}

void round_curves(Context& ctx, const std::string& table, const std::string& column,
                  const std::vector<std::pair<std::string, Overrides>>& series) {
  Table t{table, {"round", column, "seizure_pct"}, {}, {}};
  for (const auto& [label, overrides] : series) {
    auto r = run_cell(ctx.base, overrides, ctx.jobs);
    const std::size_t rounds = effective_rounds_limit(r.config, build_topology(r.config.topology));
    const auto curve = r.seizure_curve(rounds);
    for (std::size_t j = 0; j < curve.size(); ++j)
      t.rows.push_back({std::to_string(j + 1), label, format_cell(curve[j])});
    auto first = r.first_compromise_round();
    ctx.out.summary.push_back(column + "=" + label + " first_compromise_round " +
                              (first ? std::to_string(*first) : std::string("none")) + " final_seizure_pct " +
                              (curve.empty() ? "0" : format_cell(curve.back())));
  }
  ctx.out.tables.push_back(std::move(t));
}

std::vector<std::pair<std::string, Overrides>> strategy_series() {
  return {{"near_first", {{"placement.strategy", "near_first"}}},
          {"random", {{"placement.strategy", "random"}}},
          {"clustered", {{"placement.strategy", "clustered"}}}};
}

void fd_inversion(Context& ctx, const std::string& table) {
  Table t{table, {"round", "f_d", "objective", "seizure_pct"}, {}, {}};
  for (const char* objective : {"seizure", "deletion"})
    for (int fd = 2; fd <= 5; ++fd) {
      auto r = run_cell(ctx.base, {{"data.f_d", std::to_string(fd)}, {"attacker.objective", objective}}, ctx.jobs);
      const std::size_t rounds = effective_rounds_limit(r.config, build_topology(r.config.topology));
      const auto curve = r.seizure_curve(rounds);
      for (std::size_t j = 0; j < curve.size(); ++j)
        t.rows.push_back({std::to_string(j + 1), std::to_string(fd), objective, format_cell(curve[j])});
    }
  ctx.out.tables.push_back(std::move(t));
}

void normalized_distance(Context& ctx) {
  Table t{"fig5a", {"site", "strategy", "mean_dfk_hops", "normalized"}, {}, {}};
  const std::vector<std::pair<std::string, ScenarioConfig>> sites{{"line", corridor_config()},
                                                                  {"grid", block_config()}};
  for (auto [site, config] : sites) {
    config.seeds = seed_range(ctx.seeds);
    double reference = 0.0;
    for (const char* strategy : {"near_first", "random", "clustered"}) {
      auto r = run_cell(config, {{"placement.strategy", strategy}}, ctx.jobs);
      const double d = r.mean_dfk_hops();
      if (std::string(strategy) == "near_first") reference = d;
      t.rows.push_back({site, strategy, format_cell(d), format_cell(reference > 0.0 ? d / reference : 0.0)});
    }
  }
  ctx.out.tables.push_back(std::move(t));
}

void instruction_scaling(Context& ctx) {
  Table t{"fig5b", {"n", "protocol", "instructions"}, {}, {}};
  for (std::size_t side : {5, 7, 10, 15}) {
    ScenarioConfig config = ctx.base;
    config.topology.kind = TopologyKind::grid;
    config.topology.side = side;
    std::map<Protocol, std::vector<double>> counts;
    const auto seeds = seed_range(ctx.seeds);
    std::vector<std::map<Protocol, OverheadLedger>> loads(seeds.size());
    parallel_for(seeds.size(), ctx.jobs, [&](std::size_t i) { loads[i] = routing_load(config, seeds[i]); });
    for (const auto& load : loads)
      for (const auto& [protocol, ledger] : load) counts[protocol].push_back(static_cast<double>(ledger.instruction_count));
    for (Protocol p : {Protocol::dsr, Protocol::aodv, Protocol::gpsr})
      t.rows.push_back({std::to_string(side * side), to_string(p), format_cell(stats::mean(counts[p]))});
  }
  ctx.out.tables.push_back(std::move(t));
}

void communication(Context& ctx) {
  const std::uint64_t seed = 1;
  const auto load = routing_load(ctx.base, seed);
  std::vector<std::pair<std::string, OverheadLedger>> ledgers;
  for (const auto& [protocol, ledger] : load) ledgers.emplace_back(to_string(protocol), ledger);
  std::ostringstream ledger_csv;
  write_ledger_csv(ledger_csv, ledgers);
  ctx.out.tables.push_back({"fig5c_ledger", {}, {}, ledger_csv.str()});

  const Topology topology = build_topology(ctx.base.topology);
  const NetworkGraph graph = bootstrap_graph(ctx.base, topology, seed);
  const auto clustering = make_clustering(ctx.base, graph, seed);
  std::vector<Flow> flows;
  DataId id = 0;
  for (NodeId origin : graph.ids()) {
    Rng rng = Rng::stream(seed, "placement", id);
    const auto plan = place_datum(ctx.base, graph, clustering ? &*clustering : nullptr,
                                  DataItem{id++, origin, ctx.base.f_k, ctx.base.f_d}, rng);
    flows.push_back({origin, plan.remote_holders()});
  }
  const auto cmp = distributed_overhead_model(graph, flows, ctx.base.hello_rounds);
  Table t{"fig5c", {"model", "request", "reply", "hello", "distribution", "total"}, {}, {}};
  auto row = [&](const char* name, const ControlMessageCounts& c) {
    t.rows.push_back({name, std::to_string(c.request), std::to_string(c.reply), std::to_string(c.hello),
                      std::to_string(c.distribution), std::to_string(c.total())});
  };
  row("traditional_aodv", cmp.traditional_aodv);
  row("centralized", cmp.centralized);
  ctx.out.tables.push_back(std::move(t));
  const double ratio = cmp.centralized.total() == 0
                           ? 0.0
                           : static_cast<double>(cmp.traditional_aodv.total()) /
                                 static_cast<double>(cmp.centralized.total());
  ctx.out.summary.push_back("traditional_request_reply_per_datum " + format_cell(cmp.traditional_per_datum));
  ctx.out.summary.push_back("traditional_to_centralized_message_ratio " + format_cell(ratio));
}

struct PresetEntry {
  const char* name;
  const char* description;
  std::function<ScenarioConfig()> base;
  std::size_t default_seeds;
  std::function<void(Context&)> run;
  std::vector<std::string> notes;
};

std::vector<Overrides> single_axis(const std::string& key, const std::vector<std::string>& values) {
  std::vector<Overrides> out;
  for (const auto& v : values) out.push_back({{key, v}});
  return out;
}

std::vector<std::vector<std::string>> labels_of(const std::vector<std::string>& values) {
  std::vector<std::vector<std::string>> out;
  for (const auto& v : values) out.push_back({v});
  return out;
}

const std::vector<PresetEntry>& presets() {
  static const std::string stand_in =
      "topology is a synthetic stand-in; the original testbed coordinates are not available";
  static const std::string no_sink = "sink collection disabled: curves count attack rounds only";
  static const std::vector<PresetEntry> table = {
      {"fig1a", "seizure percentage against fixed d(f_k), 1-3 attackers", reference_grid_config, 200, seizure_vs_dfk,
       {}},
      {"fig1b", "seizure percentage against sink trip time", reference_grid_config, 200,
       [](Context& c) {
         const std::vector<std::string> v{"300", "600", "900", "1200"};
         method_sweep(c, "fig1b", {"t_s"}, single_axis("sink.trip_duration", v), labels_of(v));
       },
       {}},
      {"fig1c", "seizure percentage for f_k in {4,6,8} with f_k = 2 f_d", reference_grid_config, 200,
       [](Context& c) {
         std::vector<Overrides> points;
         std::vector<std::vector<std::string>> labels;
         for (int fk : {4, 6, 8}) {
           points.push_back({{"data.f_k", std::to_string(fk)}, {"data.f_d", std::to_string(fk / 2)}});
           labels.push_back({std::to_string(fk), std::to_string(fk / 2)});
         }
         method_sweep(c, "fig1c", {"f_k", "f_d"}, points, labels);
       },
       {}},
      {"fig1d", "seizure percentage against f_d at f_k = 8", reference_grid_config, 200,
       [](Context& c) {
         const std::vector<std::string> v{"2", "3", "4", "5", "6", "7"};
         ScenarioConfig base = c.base;
         base.f_k = 8;
         std::swap(base, c.base);
         method_sweep(c, "fig1d", {"f_d"}, single_axis("data.f_d", v), labels_of(v));
         std::swap(base, c.base);
       },
       {}},
      {"fig1e", "seizure percentage against attacker count", reference_grid_config, 200,
       [](Context& c) {
         const std::vector<std::string> v{"1", "2", "3", "4", "5"};
         method_sweep(c, "fig1e", {"attackers"}, single_axis("attacker.count", v), labels_of(v));
       },
       {}},
      {"fig1f", "mean per-datum energy against target d(f_k)", reference_grid_config, 200, energy_curve,
       {"energy is charged along shortest-ETX routes"}},
      {"fig3a", "round curves per placement strategy, corridor", corridor_config, 100,
       [](Context& c) { round_curves(c, "fig3a", "strategy", strategy_series()); }, {stand_in, no_sink}},
      {"fig3b", "round curves with two attackers starting at opposite ends, corridor",
       [] {
         auto c = corridor_config();
         c.attackers = 2;
         c.attacker_start = "ends";
         return c;
       },
       100, [](Context& c) { round_curves(c, "fig3b", "strategy", strategy_series()); }, {stand_in, no_sink}},
      {"fig3c", "clustered round curves for f_d 2-5, seizure and deletion, corridor", corridor_config, 100,
       [](Context& c) { fd_inversion(c, "fig3c"); }, {stand_in, no_sink}},
      {"fig4a", "round curves per placement strategy, grid block", block_config, 100,
       [](Context& c) { round_curves(c, "fig4a", "strategy", strategy_series()); }, {stand_in, no_sink}},
      {"fig4b", "round curves with two attackers, grid block",
       [] {
         auto c = block_config();
         c.attackers = 2;
         c.attacker_model = AttackerModel::circular_sweep;
         c.attacker_start = "ends";
         return c;
       },
       100, [](Context& c) { round_curves(c, "fig4b", "strategy", strategy_series()); }, {stand_in, no_sink}},
      {"fig4c", "clustered round curves for f_d 2-5, seizure and deletion, grid block", block_config, 100,
       [](Context& c) { fd_inversion(c, "fig4c"); }, {stand_in, no_sink}},
      {"fig5a", "mean d(f_k) per strategy normalized to near-first", corridor_config, 100, normalized_distance,
       {stand_in}},
      {"fig5b", "sink instruction counts against network size",
       [] {
         auto c = reference_grid_config();
         c.strategy = Strategy::clustered;
         return c;
       },
       5, instruction_scaling, {"every node originates one datum per trip"}},
      {"fig5c", "control traffic of traditional and centralized routing",
       [] {
         auto c = reference_grid_config();
         c.strategy = Strategy::clustered;
         return c;
       },
       1, communication, {"every node originates one datum per trip"}},
  };
  return table;
}

const PresetEntry& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (name == p.name) return p;
  throw Error(ErrorCode::invalid_argument, "unknown preset '" + name + "'");
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : presets()) out.emplace_back(p.name);
  return out;
}

std::string preset_description(const std::string& name) { return find_preset(name).description; }

PresetOutput run_preset(const std::string& name, const PresetOptions& options) {
  const PresetEntry& entry = find_preset(name);
  Context ctx;
  ctx.name = name;
  ctx.base = entry.base();
  for (const auto& [k, v] : options.overrides) set_config_value(ctx.base, k, v);
  ctx.seeds = options.seeds ? options.seeds : entry.default_seeds;
  ctx.base.seeds = seed_range(ctx.seeds);
  ctx.base.validate();
  ctx.jobs = options.jobs;
  ctx.out.name = name;
  ctx.out.base = ctx.base;
  ctx.out.notes = entry.notes;
  for (const auto& [k, v] : options.overrides) ctx.out.notes.push_back("override " + k + " = " + v);
  entry.run(ctx);
  return std::move(ctx.out);
}

}  // namespace uwsn
