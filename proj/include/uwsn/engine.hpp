#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "uwsn/energy.hpp"
#include "uwsn/mobility.hpp"
#include "uwsn/placement.hpp"
#include "uwsn/routing.hpp"
#include "uwsn/topology.hpp"

namespace uwsn {

enum class TopologyKind { grid, rect, line, file };
enum class Strategy { near_first, far_first, random, fixed_distance, clustered, origin_only };
enum class Objective { seizure, deletion };
enum class Generation { single, per_node };

const char* to_string(TopologyKind kind);
const char* to_string(Strategy strategy);
const char* to_string(Objective objective);
const char* to_string(Generation generation);
TopologyKind parse_topology_kind(const std::string& name);
Strategy parse_strategy(const std::string& name);
Objective parse_objective(const std::string& name);
Generation parse_generation(const std::string& name);

struct TopologySpec {
  TopologyKind kind = TopologyKind::grid;
  std::size_t side = 10;
  std::size_t cols = 10;
  std::size_t rows = 5;
  std::size_t count = 50;
  std::string file;
  double spacing = 100.0;   // d
  double tx_range = 120.0;  // 4-neighborhood on a lattice
  double delivery = 1.0;
};

/// Full parameterization of one experiment. Defaults follow the reference
/// grid setup: 10x10 nodes 100 m apart, 600 s sink trips, one attacker at
/// 10 m/s spending 20 s per node, 6 fragments of which 3 decode.
struct ScenarioConfig {
  TopologySpec topology;

  std::uint32_t hello_rounds = 10;
  double etx_threshold = 3.0;
  double sink_range = 0.0;   // 0: spacing * sqrt(2)
  double sample_step = 0.0;  // 0: spacing / 2

  double trip_duration = 600.0;  // t_s; 0 disables collection
  std::uint32_t trips = 1;

  std::uint32_t attackers = 1;
  AttackerModel attacker_model = AttackerModel::manhattan;
  double attacker_speed = 10.0;  // v
  double seizure_time = 20.0;    // r
  std::string attacker_start = "random";  // random | ends | <node id>
  bool pooled = true;
  Objective objective = Objective::seizure;

  std::uint32_t f_k = 6;
  std::uint32_t f_d = 3;
  std::uint32_t cap = 1;
  bool allow_unsafe_cap = false;
  Generation generation = Generation::single;
  std::string origin = "random";  // random | <node id>

  Strategy strategy = Strategy::clustered;
  double target_dfk = 6.0;
  double dfk_tolerance = 0.5;
  bool clustered_origin_holds = true;
  std::uint32_t kmeans_restarts = 10;

  Protocol protocol = Protocol::dsr;
  RoutingParams routing;
  RadioProfile radio;

  std::vector<std::uint64_t> seeds{1};
  std::uint32_t rounds_limit = 0;  // 0: derived from trips or node count

  /// Throws Error(invalid_config) naming the violated rule.
  void validate() const;
};

Topology build_topology(const TopologySpec& spec);

/// Seconds per attacker round: nominal hop travel plus seizure.
double round_cost(const ScenarioConfig& config, const Topology& topology);
std::uint32_t effective_rounds_limit(const ScenarioConfig& config, const Topology& topology);

struct Event {
  std::size_t round = 0;
  std::string type;   // generate, place, collect, decode, attack, seize, erase, compromise
  std::string actor;  // sink, node:<id>, attacker:<i>
  std::optional<NodeId> node;
  std::optional<DataId> data_id;
  std::optional<FragmentIndex> fragment;
};

/// Seizure: the pools (pooled, or any single pool) hold >= f_d distinct
/// fragments of the datum. Deletion: fewer than f_d distinct fragments are
/// still stored or already collected by the sink.
bool attacker_success_check(const std::vector<std::set<FragmentIndex>>& pools, std::uint32_t f_d, bool pooled);
bool deletion_success_check(const std::set<FragmentIndex>& stored, const std::set<FragmentIndex>& collected,
                            std::uint32_t f_d);

struct RunReport {
  std::uint64_t seed = 0;
  std::size_t rounds_run = 0;
  std::size_t data_generated = 0;
  std::size_t data_compromised = 0;
  std::size_t data_decoded = 0;
  std::optional<std::size_t> rounds_to_compromise;  // first compromised datum
  std::vector<std::size_t> compromise_rounds;       // per compromised datum
  std::vector<std::size_t> attacks_to_compromise;   // per compromised datum, attack steps since generation
  std::vector<double> dfk_hops;
  std::vector<double> dfk_meters;
  std::size_t neighbor_violations = 0;
  std::size_t origin_redraws = 0;
  EnergyLedger energy;
  OverheadLedger overhead;
  std::vector<PlacementPlan> plans;
  std::vector<Event> events;
  std::vector<AttackPathRow> attack_path;

  bool compromised() const { return data_compromised > 0; }
  double seizure_percentage() const;
};

struct SimulationReport {
  ScenarioConfig config;
  std::vector<RunReport> runs;

  std::size_t compromised_runs() const;
  /// Mean over runs of the per-run compromised share, in percent.
  double seizure_percentage() const;
  /// Wilson 95% interval of the compromised-run share, in percent.
  std::pair<double, double> seizure_interval() const;
  std::vector<std::size_t> rounds_to_compromise() const;
  /// Percent of generated data compromised by round 1..max_round, averaged
  /// over runs.
  std::vector<double> seizure_curve(std::size_t max_round) const;
  /// First round at which any run is compromised.
  std::optional<std::size_t> first_compromise_round() const;
  double mean_dfk_hops() const;
  double mean_dfk_meters() const;
};

/// The sink's model after its bootstrap trip: HELLO exchange plus coordinate
/// averaging along the tour.
NetworkGraph bootstrap_graph(const ScenarioConfig& config, const Topology& topology, std::uint64_t seed);

/// Clustering used by the clustered strategy, or nullopt for other strategies.
std::optional<Clustering> make_clustering(const ScenarioConfig& config, const NetworkGraph& graph, std::uint64_t seed);

/// Places one datum with the config's strategy. `clustering` is required for
/// the clustered strategy.
PlacementPlan place_datum(const ScenarioConfig& config, const NetworkGraph& graph, const Clustering* clustering,
                          const DataItem& item, Rng& rng);

RunReport run_single(const ScenarioConfig& config, const Topology& topology, std::uint64_t seed);

/// Runs every seed of the config; `jobs` > 1 spreads seeds over threads.
SimulationReport run_scenario(const ScenarioConfig& config, unsigned jobs = 1);

struct SweepAxis {
  std::string key;  // section.key, as in scenario files
  std::vector<std::string> values;
};

struct SweepCell {
  std::vector<std::pair<std::string, std::string>> overrides;
  std::optional<SimulationReport> report;
  std::string error;  // set when the cell failed
};

/// Cartesian expansion of the axes over a base config. A failing cell keeps
/// its error message and the sweep continues.
std::vector<SweepCell> sweep(const ScenarioConfig& base, const std::vector<SweepAxis>& axes, unsigned jobs = 1);

/// Calls fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

void write_events_csv(std::ostream& out, const std::vector<Event>& events);

}  // namespace uwsn
