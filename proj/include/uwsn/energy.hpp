#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "uwsn/common.hpp"
#include "uwsn/placement.hpp"
#include "uwsn/routing.hpp"
#include "uwsn/topology.hpp"

namespace uwsn {

/// Per-packet radio costs. The defaults are implementation values in the range
/// of a low-power 802.15.4 transceiver; only their ratio shapes the curves.
struct RadioProfile {
  double e_tx = 0.0016;  // joules per transmission at full power
  double e_rx = 0.0012;  // joules per reception
  double default_power = 1.0;
  std::map<NodeId, double> power;  // per-node transmit-power fraction overrides
  bool etx_weighted = false;       // charge expected retransmissions on lossy links

  double power_of(NodeId id) const;
  void validate() const;
};

struct EnergyLedger {
  std::map<NodeId, double> per_node;
  std::map<DataId, double> per_datum;
  double fragment_total = 0.0;
  double hello_total = 0.0;
  double distribution_total = 0.0;

  double node_total() const;
  double total() const { return fragment_total + hello_total + distribution_total; }
  void merge(const EnergyLedger& other);
};

/// e_f = sum over hops of (e_tx * p_sender + e_rx). With a ledger, the
/// transmit share goes to the sender and the receive share to the receiver.
/// `graph` is only consulted when the profile is ETX-weighted.
double fragment_energy(const SourceRoute& route, const RadioProfile& profile, EnergyLedger* ledger = nullptr,
                       const NetworkGraph* graph = nullptr);

/// e_k: sum of e_f over the plan's fragments. Fragments kept by the origin
/// cost nothing; every other holder needs a route origin -> holder in
/// `routes`, otherwise missing_route is thrown.
double datum_energy(const PlacementPlan& plan, const std::vector<SourceRoute>& routes, const RadioProfile& profile,
                    EnergyLedger* ledger = nullptr, const NetworkGraph* graph = nullptr);

/// One transmission per node per HELLO round and one reception per in-range
/// listener.
void charge_hello(const Topology& topology, std::uint32_t rounds, const RadioProfile& profile, EnergyLedger& ledger);

/// One table/route reception per node.
void charge_distribution(const std::vector<NodeId>& nodes, const RadioProfile& profile, EnergyLedger& ledger);

struct EnergySweepRow {
  double target_dfk = 0.0;
  double mean_ek = 0.0;
  double stddev = 0.0;
  std::size_t samples = 0;
};

struct EnergySweepOptions {
  std::uint32_t f_k = 6;
  std::uint32_t f_d = 3;
  FixedDistanceOptions placement;
  std::uint32_t origin_redraws = 16;
};

/// Mean e_k of fixed-distance placements per target d(f_k), charging
/// shortest-ETX routes. Seeds that cannot reach a target after
/// `origin_redraws` origins are skipped; a target no seed reaches throws.
std::vector<EnergySweepRow> energy_vs_dfk_sweep(const NetworkGraph& graph, const std::vector<double>& targets,
                                                const RadioProfile& profile, const std::vector<std::uint64_t>& seeds,
                                                const EnergySweepOptions& options = {});

void write_node_energy_csv(std::ostream& out, const EnergyLedger& ledger);
void write_datum_energy_csv(std::ostream& out, const EnergyLedger& ledger);
void write_energy_sweep_csv(std::ostream& out, const std::vector<EnergySweepRow>& rows);

}  // namespace uwsn
