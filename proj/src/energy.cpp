#include "uwsn/energy.hpp"

#include <ostream>

#include "uwsn/rng.hpp"
#include "uwsn/stats.hpp"

namespace uwsn {

double RadioProfile::power_of(NodeId id) const {
  auto it = power.find(id);
  return it == power.end() ? default_power : it->second;
}

void RadioProfile::validate() const {
  if (!(e_tx > 0.0) || !(e_rx > 0.0)) throw Error(ErrorCode::invalid_config, "e_tx and e_rx must be positive");
  auto check = [](double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_config, "transmit power fraction must be in [0, 1]");
  };
  check(default_power);
  for (const auto& [id, p] : power) check(p);
}

double EnergyLedger::node_total() const {
  double sum = 0.0;
  for (const auto& [id, joules] : per_node) sum += joules;
  return sum;
}

void EnergyLedger::merge(const EnergyLedger& other) {
  for (const auto& [id, joules] : other.per_node) per_node[id] += joules;
  for (const auto& [id, joules] : other.per_datum) per_datum[id] += joules;
  fragment_total += other.fragment_total;
  hello_total += other.hello_total;
  distribution_total += other.distribution_total;
}

double fragment_energy(const SourceRoute& route, const RadioProfile& profile, EnergyLedger* ledger,
                       const NetworkGraph* graph) {
  double e_f = 0.0;
  for (std::size_t i = 0; i + 1 < route.hops.size(); ++i) {
    const NodeId sender = route.hops[i];
    const NodeId receiver = route.hops[i + 1];
    double tx = profile.e_tx * profile.power_of(sender);
    if (profile.etx_weighted && graph) {
      if (auto etx = graph->etx(sender, receiver)) tx *= *etx;
    }
    e_f += tx + profile.e_rx;
    if (ledger) {
      ledger->per_node[sender] += tx;
      ledger->per_node[receiver] += profile.e_rx;
    }
  }
  if (ledger) ledger->fragment_total += e_f;
  return e_f;
}

double datum_energy(const PlacementPlan& plan, const std::vector<SourceRoute>& routes, const RadioProfile& profile,
                    EnergyLedger* ledger, const NetworkGraph* graph) {
  double e_k = 0.0;
  for (NodeId holder : plan.assignments) {
    if (holder == plan.origin) continue;
    const SourceRoute* route = nullptr;
    for (const auto& r : routes)
      if (r.origin == plan.origin && r.destination == holder) {
        route = &r;
        break;
      }
    if (!route)
      throw Error(ErrorCode::missing_route, "no route from " + std::to_string(plan.origin) + " to fragment holder " +
                                                std::to_string(holder));
    e_k += fragment_energy(*route, profile, ledger, graph);
  }
  if (ledger) ledger->per_datum[plan.data_id] += e_k;
  return e_k;
}

void charge_hello(const Topology& topology, std::uint32_t rounds, const RadioProfile& profile, EnergyLedger& ledger) {
  for (const auto& node : topology.nodes()) {
    const double tx = rounds * profile.e_tx * profile.power_of(node.id);
    ledger.per_node[node.id] += tx;
    ledger.hello_total += tx;
    for (NodeId listener : topology.neighbors(node.id)) {
      const double rx = rounds * profile.e_rx;
      ledger.per_node[listener] += rx;
      ledger.hello_total += rx;
    }
  }
}

void charge_distribution(const std::vector<NodeId>& nodes, const RadioProfile& profile, EnergyLedger& ledger) {
  for (NodeId id : nodes) {
    ledger.per_node[id] += profile.e_rx;
    ledger.distribution_total += profile.e_rx;
  }
}

std::vector<EnergySweepRow> energy_vs_dfk_sweep(const NetworkGraph& graph, const std::vector<double>& targets,
                                                const RadioProfile& profile, const std::vector<std::uint64_t>& seeds,
                                                const EnergySweepOptions& options) {
  profile.validate();
  const std::vector<NodeId> ids = graph.ids();
  std::vector<EnergySweepRow> rows;
  for (double target : targets) {
    EnergySweepRow row;
    row.target_dfk = target;
    if (target <= 0.0) {
      row.samples = seeds.size();
      rows.push_back(row);
      continue;
    }
    std::vector<double> values;
    for (std::uint64_t seed : seeds) {
      Rng rng = Rng::stream(seed, "energy", static_cast<std::uint64_t>(target * 1000.0));
      for (std::uint32_t attempt = 0; attempt < options.origin_redraws; ++attempt) {
        DataItem item{0, ids[rng.below(ids.size())], options.f_k, options.f_d};
        try {
          PlacementPlan plan = place_fixed_distance(item, graph, target, options.placement, rng);
          std::vector<SourceRoute> routes;
          for (NodeId holder : plan.remote_holders()) routes.push_back(shortest_etx_oracle(graph, plan.origin, holder));
          values.push_back(datum_energy(plan, routes, profile, nullptr, &graph));
          break;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::target_unreachable && e.code() != ErrorCode::unreachable) throw;
        }
      }
    }
    if (values.empty())
      throw Error(ErrorCode::target_unreachable, "no seed reached d(f_k) = " + std::to_string(target));
    row.mean_ek = stats::mean(values);
    row.stddev = values.size() > 1 ? stats::stddev(values) : 0.0;
    row.samples = values.size();
    rows.push_back(row);
  }
  return rows;
}

void write_node_energy_csv(std::ostream& out, const EnergyLedger& ledger) {
  out << "node_id,joules\n";
  for (const auto& [id, joules] : ledger.per_node) out << id << ',' << joules << '\n';
}

void write_datum_energy_csv(std::ostream& out, const EnergyLedger& ledger) {
  out << "data_id,e_k\n";
  for (const auto& [id, joules] : ledger.per_datum) out << id << ',' << joules << '\n';
}

void write_energy_sweep_csv(std::ostream& out, const std::vector<EnergySweepRow>& rows) {
  out << "target_dfk,mean_ek,stddev\n";
  for (const auto& r : rows) out << r.target_dfk << ',' << r.mean_ek << ',' << r.stddev << '\n';
}

}  // namespace uwsn
