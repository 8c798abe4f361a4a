#include "uwsn/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "uwsn/scenario_file.hpp"
#include "uwsn/stats.hpp"

namespace uwsn {

namespace {

constexpr double kTimeEps = 1e-9;

template <class E>
struct Names {
  E value;
  const char* name;
};

constexpr Names<TopologyKind> kTopologyKinds[] = {
    {TopologyKind::grid, "grid"}, {TopologyKind::rect, "rect"}, {TopologyKind::line, "line"}, {TopologyKind::file, "file"}};
constexpr Names<Strategy> kStrategies[] = {{Strategy::near_first, "near_first"},
                                           {Strategy::far_first, "far_first"},
                                           {Strategy::random, "random"},
                                           {Strategy::fixed_distance, "fixed_distance"},
                                           {Strategy::clustered, "clustered"},
                                           {Strategy::origin_only, "origin_only"}};
constexpr Names<Objective> kObjectives[] = {{Objective::seizure, "seizure"}, {Objective::deletion, "deletion"}};
constexpr Names<Generation> kGenerations[] = {{Generation::single, "single"}, {Generation::per_node, "per_node"}};

template <class E, std::size_t N>
const char* name_of(const Names<E> (&table)[N], E value) {
  for (const auto& entry : table)
    if (entry.value == value) return entry.name;
  return "unknown";
}

template <class E, std::size_t N>
E parse_name(const Names<E> (&table)[N], const std::string& name, const char* what) {
  for (const auto& entry : table)
    if (name == entry.name) return entry.value;
  throw Error(ErrorCode::invalid_config, std::string("unknown ") + what + " '" + name + "'");
}

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::invalid_config, message); }

std::optional<NodeId> node_literal(const std::string& text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); }))
    return std::nullopt;
  return static_cast<NodeId>(std::stoul(text));
}

}  // namespace

const char* to_string(TopologyKind kind) { return name_of(kTopologyKinds, kind); }
const char* to_string(Strategy strategy) { return name_of(kStrategies, strategy); }
const char* to_string(Objective objective) { return name_of(kObjectives, objective); }
const char* to_string(Generation generation) { return name_of(kGenerations, generation); }
TopologyKind parse_topology_kind(const std::string& name) { return parse_name(kTopologyKinds, name, "topology kind"); }
Strategy parse_strategy(const std::string& name) { return parse_name(kStrategies, name, "placement strategy"); }
Objective parse_objective(const std::string& name) { return parse_name(kObjectives, name, "attack objective"); }
Generation parse_generation(const std::string& name) { return parse_name(kGenerations, name, "generation mode"); }

void ScenarioConfig::validate() const {
  const auto& t = topology;
  if (!(t.spacing > 0.0)) invalid("topology.spacing must be positive");
  if (!(t.tx_range > 0.0)) invalid("topology.tx_range must be positive");
  if (!(t.delivery > 0.0 && t.delivery <= 1.0)) invalid("topology.delivery must be in (0, 1]");
  if (t.kind == TopologyKind::grid && t.side < 2) invalid("topology.side must be at least 2");
  if (t.kind == TopologyKind::rect && (t.cols < 1 || t.rows < 1 || t.cols * t.rows < 2))
    invalid("topology.cols * topology.rows must be at least 2");
  if (t.kind == TopologyKind::line && t.count < 2) invalid("topology.count must be at least 2");
  if (t.kind == TopologyKind::file && t.file.empty()) invalid("topology.file is required for kind = file");
  if (hello_rounds < 1) invalid("network.hello_rounds must be at least 1");
  if (!(etx_threshold >= 1.0)) invalid("network.etx_threshold must be at least 1");
  if (sink_range < 0.0 || sample_step < 0.0) invalid("network.sink_range and network.sample_step must be non-negative");
  if (trip_duration < 0.0) invalid("sink.trip_duration must be non-negative");
  if (trips < 1) invalid("sink.trips must be at least 1");
  if (attackers < 1) invalid("attacker.count must be at least 1");
  if (!(attacker_speed > 0.0)) invalid("attacker.speed must be positive");
  if (seizure_time < 0.0) invalid("attacker.seizure_time must be non-negative");
  if (attacker_start != "random" && attacker_start != "ends" && !node_literal(attacker_start))
    invalid("attacker.start must be random, ends, or a node id");
  if (origin != "random" && !node_literal(origin)) invalid("data.origin must be random or a node id");
  if (f_k < 1) invalid("data.f_k must be at least 1");
  if (f_d < 1 || f_d > f_k) invalid("data.f_d must satisfy 1 <= f_d <= f_k");
  if (cap < 1) invalid("data.cap must be at least 1");
  if (!allow_unsafe_cap && cap > std::max<std::uint32_t>(1, f_d - 1))
    invalid("data.cap must not exceed f_d - 1 unless data.allow_unsafe_cap is set");
  if (strategy == Strategy::origin_only && cap < f_k) invalid("placement.strategy origin_only needs data.cap >= f_k");
  if (strategy == Strategy::fixed_distance && !(target_dfk >= 0.0))
    invalid("placement.target_dfk must be non-negative");
  if (kmeans_restarts < 1) invalid("placement.kmeans_restarts must be at least 1");
  if (!(dfk_tolerance > 0.0)) invalid("placement.tolerance must be positive");
  if (seeds.empty()) invalid("run.seeds must list at least one seed");
  try {
    radio.validate();
  } catch (const Error& e) {
    invalid(std::string("energy: ") + e.what());
  }
}

Topology build_topology(const TopologySpec& spec) {
  switch (spec.kind) {
    case TopologyKind::grid: return generate_grid(spec.side, spec.spacing, spec.tx_range, spec.delivery);
    case TopologyKind::rect: return generate_rect_grid(spec.cols, spec.rows, spec.spacing, spec.tx_range, spec.delivery);
    case TopologyKind::line: return generate_line(spec.count, spec.spacing, spec.tx_range, spec.delivery);
    case TopologyKind::file: return load_topology(spec.file).topology;
  }
  throw Error(ErrorCode::invalid_config, "unknown topology kind");
}

double round_cost(const ScenarioConfig& config, const Topology& topology) {
  return topology.nominal_spacing() / config.attacker_speed + config.seizure_time;
}

std::uint32_t effective_rounds_limit(const ScenarioConfig& config, const Topology& topology) {
  if (config.rounds_limit > 0) return config.rounds_limit;
  if (config.trip_duration > 0.0) {
    const double rc = round_cost(config, topology);
    return static_cast<std::uint32_t>(std::ceil(config.trips * config.trip_duration / rc - kTimeEps)) + 1;
  }
  return static_cast<std::uint32_t>(2 * topology.size());
}

bool attacker_success_check(const std::vector<std::set<FragmentIndex>>& pools, std::uint32_t f_d, bool pooled) {
  if (pooled) {
    std::set<FragmentIndex> all;
    for (const auto& pool : pools) all.insert(pool.begin(), pool.end());
    return all.size() >= f_d;
  }
  return std::any_of(pools.begin(), pools.end(), [&](const auto& pool) { return pool.size() >= f_d; });
}

bool deletion_success_check(const std::set<FragmentIndex>& stored, const std::set<FragmentIndex>& collected,
                            std::uint32_t f_d) {
  std::set<FragmentIndex> reachable = stored;
  reachable.insert(collected.begin(), collected.end());
  return reachable.size() < f_d;
}

double RunReport::seizure_percentage() const {
  return data_generated == 0 ? 0.0 : 100.0 * static_cast<double>(data_compromised) / static_cast<double>(data_generated);
}

std::size_t SimulationReport::compromised_runs() const {
  return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const RunReport& r) { return r.compromised(); }));
}

double SimulationReport::seizure_percentage() const {
  if (runs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : runs) sum += r.seizure_percentage();
  return sum / static_cast<double>(runs.size());
}

std::pair<double, double> SimulationReport::seizure_interval() const {
  if (runs.empty()) return {0.0, 100.0};
  auto [lo, hi] = stats::wilson_interval(compromised_runs(), runs.size());
  return {100.0 * lo, 100.0 * hi};
}

std::vector<std::size_t> SimulationReport::rounds_to_compromise() const {
  std::vector<std::size_t> out;
  for (const auto& r : runs)
    if (r.rounds_to_compromise) out.push_back(*r.rounds_to_compromise);
  return out;
}

std::vector<double> SimulationReport::seizure_curve(std::size_t max_round) const {
  std::vector<double> curve(max_round, 0.0);
  if (runs.empty()) return curve;
  for (const auto& r : runs) {
    if (r.data_generated == 0) continue;
    const double weight = 1.0 / static_cast<double>(r.data_generated);
    for (std::size_t round : r.compromise_rounds)
      for (std::size_t j = round; j <= max_round; ++j) curve[j - 1] += weight;
  }
  for (double& v : curve) v = 100.0 * v / static_cast<double>(runs.size());
  return curve;
}

std::optional<std::size_t> SimulationReport::first_compromise_round() const {
  std::optional<std::size_t> best;
  for (const auto& r : runs)
    if (r.rounds_to_compromise && (!best || *r.rounds_to_compromise < *best)) best = r.rounds_to_compromise;
  return best;
}

double SimulationReport::mean_dfk_hops() const {
  std::vector<double> all;
  for (const auto& r : runs) all.insert(all.end(), r.dfk_hops.begin(), r.dfk_hops.end());
  return all.empty() ? 0.0 : stats::mean(all);
}

double SimulationReport::mean_dfk_meters() const {
  std::vector<double> all;
  for (const auto& r : runs) all.insert(all.end(), r.dfk_meters.begin(), r.dfk_meters.end());
  return all.empty() ? 0.0 : stats::mean(all);
}

NetworkGraph bootstrap_graph(const ScenarioConfig& config, const Topology& topology, std::uint64_t seed) {
  const double spacing = topology.nominal_spacing();
  const double range = config.sink_range > 0.0 ? config.sink_range : spacing * std::sqrt(2.0);
  const double step = config.sample_step > 0.0 ? config.sample_step : spacing / 2.0;
  const HelloResult hello = simulate_hello_round(topology, Rng::stream(seed, "hello").next(), config.hello_rounds);
  const SinkTrajectory trip = plan_sink_trip(topology, config.trip_duration > 0.0 ? config.trip_duration : 1.0);
  return build_sink_graph(topology, hello, observe_trip(topology, trip, range, step), config.etx_threshold);
}

std::optional<Clustering> make_clustering(const ScenarioConfig& config, const NetworkGraph& graph, std::uint64_t seed) {
  if (config.strategy != Strategy::clustered) return std::nullopt;
  Rng rng = Rng::stream(seed, "kmeans");
  return kmeans_best_of(graph, config.f_k, rng, config.kmeans_restarts);
}

PlacementPlan place_datum(const ScenarioConfig& config, const NetworkGraph& graph, const Clustering* clustering,
                          const DataItem& item, Rng& rng) {
  switch (config.strategy) {
    case Strategy::near_first: return place_near_first(item, graph, rng);
    case Strategy::far_first: return place_far_first(item, graph, rng);
    case Strategy::random: return place_random(item, graph, rng);
    case Strategy::fixed_distance: {
      FixedDistanceOptions options;
      options.tolerance = config.dfk_tolerance;
      options.cap = config.cap;
      return place_fixed_distance(item, graph, config.target_dfk, options, rng);
    }
    case Strategy::clustered: {
      if (!clustering) throw Error(ErrorCode::invalid_argument, "clustered placement needs a clustering");
      ClusteredOptions options;
      options.origin_holds_own_cluster = config.clustered_origin_holds;
      return place_clustered(item, graph, *clustering, options, rng);
    }
    case Strategy::origin_only: {
      PlacementPlan plan;
      plan.data_id = item.data_id;
      plan.origin = item.origin;
      plan.assignments.assign(item.f_k, item.origin);
      plan.dfk = compute_dfk(plan, graph);
      return plan;
    }
  }
  throw Error(ErrorCode::invalid_config, "unknown placement strategy");
}

namespace {

struct DatumState {
  DataItem item;
  std::size_t first_round = 1;  // first round whose attacks can reach it
  std::map<FragmentIndex, int> stored;  // fragment index -> stored copies
  std::set<FragmentIndex> collected;
  std::vector<std::set<FragmentIndex>> pools;
  bool decoded = false;
  bool resolved = false;

  std::set<FragmentIndex> stored_set() const {
    std::set<FragmentIndex> out;
    for (const auto& [f, n] : stored)
      if (n > 0) out.insert(f);
    return out;
  }
  bool nothing_stored() const {
    return std::all_of(stored.begin(), stored.end(), [](const auto& e) { return e.second <= 0; });
  }
};

class Simulation {
 public:
  Simulation(const ScenarioConfig& config, const Topology& topology, std::uint64_t seed)
      : cfg_(config), topo_(topology), seed_(seed), data_rng_(Rng::stream(seed, "data")) {
    report_.seed = seed;
    graph_ = bootstrap_graph(cfg_, topo_, seed_);
    ids_ = graph_.ids();
    rc_ = round_cost(cfg_, topo_);
    limit_ = effective_rounds_limit(cfg_, topo_);
    clustering_ = make_clustering(cfg_, graph_, seed_);
    if (cfg_.trip_duration > 0.0) {
      const SinkTrajectory trip = plan_sink_trip(topo_, cfg_.trip_duration);
      const double gap = cfg_.trip_duration / static_cast<double>(trip.tour.size());
      for (std::size_t p = 0; p < trip.tour.size(); ++p) tour_.push_back({p * gap, trip.tour[p]});
    }
    charge_hello(topo_, cfg_.hello_rounds, cfg_.radio, report_.energy);
    make_attackers();
  }

  RunReport run() {
    process_sink_until(0.0, 0);
    for (std::size_t j = 1; j <= limit_; ++j) {
      process_sink_until(static_cast<double>(j) * rc_, j);
      if (finished()) break;
      attack_round(j);
      if (finished()) break;
    }
    return std::move(report_);
  }

 private:
  struct Visit {
    double offset;
    NodeId node;
  };

  void make_attackers() {
    const double approach = topo_.nominal_spacing();
    std::vector<NodeId> ends;
    if (cfg_.attacker_start == "ends")
      ends = cfg_.attacker_model == AttackerModel::circular_sweep ? circular_order(topo_) : line_order(topo_);
    for (std::uint32_t i = 0; i < cfg_.attackers; ++i) {
      Rng rng = Rng::stream(seed_, "attacker", i);
      NodeId start;
      int direction = rng.below(2) == 0 ? 1 : -1;
      if (auto fixed = node_literal(cfg_.attacker_start)) {
        if (!topo_.contains(*fixed)) throw Error(ErrorCode::unknown_node, "attacker start node " + cfg_.attacker_start + " does not exist");
        start = *fixed;
      } else if (!ends.empty() && i < 2) {
        start = i == 0 ? ends.front() : ends.back();
        direction = i == 0 ? 1 : -1;
      } else {
        start = ids_[rng.below(ids_.size())];
      }
      attackers_.push_back(make_attacker(topo_, cfg_.attacker_model, start, cfg_.attacker_speed, cfg_.seizure_time,
                                         approach, direction));
      attacker_rngs_.push_back(std::move(rng));
    }
  }

  bool generation_pending() const {
    if (cfg_.trip_duration <= 0.0) return !generated_once_;
    return next_visit_ == 0 ? next_trip_ < cfg_.trips : next_trip_ + 1 < cfg_.trips;
  }

  bool finished() const {
    if (generation_pending()) return false;
    return std::all_of(data_.begin(), data_.end(), [](const DatumState& d) { return d.resolved; });
  }

  void log(std::size_t round, std::string type, std::string actor, std::optional<NodeId> node = {},
           std::optional<DataId> data = {}, std::optional<FragmentIndex> fragment = {}) {
    report_.events.push_back({round, std::move(type), std::move(actor), node, data, fragment});
  }

  // Sink timeline: trip m starts at m * t_s with data generation, then visits
  // the tour at evenly spaced offsets. Events at the same instant as an
  // attack are handled before it.
  void process_sink_until(double t, std::size_t round) {
    if (cfg_.trip_duration <= 0.0) {
      if (!generated_once_) {
        generated_once_ = true;
        generate(round);
      }
      return;
    }
    for (;;) {
      const double trip_start = static_cast<double>(next_trip_) * cfg_.trip_duration;
      const double when = trip_start + tour_[next_visit_].offset;
      if (when > t + kTimeEps) break;
      if (!generation_pending() && all_resolved()) break;
      if (next_visit_ == 0 && next_trip_ < cfg_.trips) generate(round);
      visit(tour_[next_visit_].node, round);
      if (++next_visit_ == tour_.size()) {
        next_visit_ = 0;
        ++next_trip_;
      }
    }
  }

  bool all_resolved() const {
    return std::all_of(data_.begin(), data_.end(), [](const DatumState& d) { return d.resolved; });
  }

  void generate(std::size_t round) {
    std::vector<NodeId> origins;
    if (cfg_.generation == Generation::per_node) {
      origins = ids_;
    } else if (auto fixed = node_literal(cfg_.origin)) {
      if (!graph_.contains(*fixed)) throw Error(ErrorCode::unknown_node, "origin node " + cfg_.origin + " does not exist");
      origins.push_back(*fixed);
    } else {
      origins.push_back(ids_[data_rng_.below(ids_.size())]);
    }
    for (NodeId origin : origins) disperse(origin, round);
    charge_distribution(ids_, cfg_.radio, report_.energy);
    report_.overhead.distribution_messages += ids_.size();
  }

  PlacementPlan place(const DataItem& item, Rng& rng) {
    return place_datum(cfg_, graph_, clustering_ ? &*clustering_ : nullptr, item, rng);
  }

  std::vector<SourceRoute> route(const PlacementPlan& plan) {
    const std::vector<NodeId> holders = plan.remote_holders();
    std::vector<SourceRoute> routes;
    auto fail = [&](NodeId dest) {
      throw Error(ErrorCode::missing_route,
                  "no " + std::string(to_string(cfg_.protocol)) + " route from " + std::to_string(plan.origin) +
                      " to " + std::to_string(dest));
    };
    switch (cfg_.protocol) {
      case Protocol::dsr: {
        DsrResult r = dsr_routes(graph_, plan.origin, holders, cfg_.routing);
        if (!r.failures.empty()) fail(r.failures.front().destination);
        report_.overhead.merge(r.ledger);
        routes = std::move(r.routes);
        break;
      }
      case Protocol::aodv: {
        AodvResult r = aodv_tables(graph_, plan.origin, holders, cfg_.routing);
        if (!r.failures.empty()) fail(r.failures.front().destination);
        report_.overhead.merge(r.ledger);
        for (NodeId dest : holders) {
          auto hops = r.follow(plan.origin, dest, graph_.size());
          if (!hops) fail(dest);
          SourceRoute sr{plan.origin, dest, *hops, 0.0};
          for (std::size_t i = 0; i + 1 < hops->size(); ++i) sr.total_etx += *graph_.etx((*hops)[i], (*hops)[i + 1]);
          routes.push_back(std::move(sr));
        }
        break;
      }
      case Protocol::gpsr: {
        GpsrResult r = gpsr_tables(graph_, plan.origin, holders, cfg_.routing);
        for (NodeId dest : holders) {
          GpsrDelivery d = gpsr_deliver(graph_, plan.origin, dest);
          r.ledger.hole_fallbacks += d.hole_fallbacks;
          routes.push_back(std::move(d.route));
        }
        report_.overhead.merge(r.ledger);
        break;
      }
    }
    return routes;
  }

  void disperse(NodeId origin, std::size_t round) {
    const DataId id = static_cast<DataId>(data_.size());
    DataItem item{id, origin, cfg_.f_k, cfg_.f_d};
    Rng rng = Rng::stream(seed_, "placement", id);
    PlacementPlan plan;
    for (std::uint32_t attempt = 0;; ++attempt) {
      try {
        plan = place(item, rng);
        break;
      } catch (const TargetUnreachableError&) {
        // The target can be out of reach from corner or edge origins.
        if (cfg_.generation == Generation::per_node || node_literal(cfg_.origin) || attempt + 1 >= 16) throw;
        item.origin = ids_[data_rng_.below(ids_.size())];
        ++report_.origin_redraws;
      }
    }
    const std::vector<SourceRoute> routes = route(plan);
    datum_energy(plan, routes, cfg_.radio, &report_.energy, &graph_);

    DatumState state;
    state.item = item;
    state.first_round = std::max<std::size_t>(1, round);
    state.pools.resize(cfg_.attackers);
    std::map<NodeId, std::uint32_t> per_node;
    log(round, "generate", "node:" + std::to_string(origin), origin, id);
    for (FragmentIndex f = 0; f < plan.assignments.size(); ++f) {
      const NodeId holder = plan.assignments[f];
      if (++per_node[holder] > cfg_.cap)
        throw Error(ErrorCode::placement_infeasible,
                    "node " + std::to_string(holder) + " would hold more than " + std::to_string(cfg_.cap) +
                        " fragments of datum " + std::to_string(id));
      store_[holder].push_back({id, f});
      ++state.stored[f];
      log(round, "place", "node:" + std::to_string(origin), holder, id, f);
    }
    report_.dfk_hops.push_back(plan.dfk.hops);
    report_.dfk_meters.push_back(plan.dfk.meters);
    if (plan.neighbor_violation) ++report_.neighbor_violations;
    report_.plans.push_back(std::move(plan));
    data_.push_back(std::move(state));
    ++report_.data_generated;
  }

  void visit(NodeId node, std::size_t round) {
    auto it = store_.find(node);
    if (it == store_.end()) return;
    std::set<DataId> touched;
    for (const auto& [id, f] : it->second) {
      DatumState& d = data_[id];
      d.collected.insert(f);
      --d.stored[f];
      touched.insert(id);
      log(round, "collect", "sink", node, id, f);
    }
    store_.erase(it);
    for (DataId id : touched) {
      DatumState& d = data_[id];
      if (d.resolved) continue;
      if (!d.decoded && d.collected.size() >= d.item.f_d) {
        d.decoded = true;
        ++report_.data_decoded;
        log(round, "decode", "sink", {}, id);
      }
      if (cfg_.objective == Objective::deletion ? d.decoded : d.nothing_stored()) d.resolved = true;
    }
  }

  void attack_round(std::size_t round) {
    report_.rounds_run = round;
    std::set<DataId> touched;
    for (std::size_t i = 0; i < attackers_.size(); ++i) {
      AttackerStep step = step_attacker(std::move(attackers_[i]), topo_, attacker_rngs_[i]);
      attackers_[i] = std::move(step.state);
      const NodeId node = step.attacked;
      const std::string actor = "attacker:" + std::to_string(i);
      report_.attack_path.push_back({round, i, node});
      log(round, "attack", actor, node);
      auto it = store_.find(node);
      if (it == store_.end()) continue;
      for (const auto& [id, f] : it->second) {
        DatumState& d = data_[id];
        touched.insert(id);
        if (cfg_.objective == Objective::seizure) {
          d.pools[i].insert(f);
          log(round, "seize", actor, node, id, f);
        } else {
          --d.stored[f];
          log(round, "erase", actor, node, id, f);
        }
      }
      if (cfg_.objective == Objective::deletion) store_.erase(it);
    }
    for (DataId id : touched) {
      DatumState& d = data_[id];
      if (d.resolved) continue;
      const bool success = cfg_.objective == Objective::seizure
                               ? attacker_success_check(d.pools, d.item.f_d, cfg_.pooled)
                               : deletion_success_check(d.stored_set(), d.collected, d.item.f_d);
      if (!success) continue;
      d.resolved = true;
      ++report_.data_compromised;
      report_.compromise_rounds.push_back(round);
      report_.attacks_to_compromise.push_back(round - d.first_round + 1);
      if (!report_.rounds_to_compromise) report_.rounds_to_compromise = round;
      log(round, "compromise", "attackers", {}, id);
    }
  }

  const ScenarioConfig& cfg_;
  const Topology& topo_;
  std::uint64_t seed_;
  Rng data_rng_;
  RunReport report_;
  NetworkGraph graph_;
  std::vector<NodeId> ids_;
  double rc_ = 0.0;
  std::size_t limit_ = 0;
  std::optional<Clustering> clustering_;
  std::vector<Visit> tour_;
  std::size_t next_trip_ = 0;
  std::size_t next_visit_ = 0;
  bool generated_once_ = false;
  std::vector<AttackerState> attackers_;
  std::vector<Rng> attacker_rngs_;
  std::vector<DatumState> data_;
  std::map<NodeId, std::vector<std::pair<DataId, FragmentIndex>>> store_;
};

}  // namespace

RunReport run_single(const ScenarioConfig& config, const Topology& topology, std::uint64_t seed) {
  return Simulation(config, topology, seed).run();
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SimulationReport run_scenario(const ScenarioConfig& config, unsigned jobs) {
  config.validate();
  const Topology topology = build_topology(config.topology);
  SimulationReport report;
  report.config = config;
  report.runs.resize(config.seeds.size());
  parallel_for(config.seeds.size(), jobs,
               [&](std::size_t i) { report.runs[i] = run_single(config, topology, config.seeds[i]); });
  return report;
}

std::vector<SweepCell> sweep(const ScenarioConfig& base, const std::vector<SweepAxis>& axes, unsigned jobs) {
  std::vector<std::vector<std::pair<std::string, std::string>>> combos{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& combo : combos)
      for (const auto& value : axis.values) {
        auto extended = combo;
        extended.emplace_back(axis.key, value);
        next.push_back(std::move(extended));
      }
    combos = std::move(next);
  }
  std::vector<SweepCell> cells;
  for (auto& combo : combos) {
    SweepCell cell;
    cell.overrides = std::move(combo);
    try {
      ScenarioConfig config = base;
      for (const auto& [key, value] : cell.overrides) set_config_value(config, key, value);
      cell.report = run_scenario(config, jobs);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

void write_events_csv(std::ostream& out, const std::vector<Event>& events) {
  out << "round,event_type,actor,node,data_id,fragment_index\n";
  for (const auto& e : events) {
    out << e.round << ',' << e.type << ',' << e.actor << ',';
    if (e.node) out << *e.node;
    out << ',';
    if (e.data_id) out << *e.data_id;
    out << ',';
    if (e.fragment) out << *e.fragment;
    out << '\n';
  }
}

}  // namespace uwsn
