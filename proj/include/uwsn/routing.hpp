#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uwsn/common.hpp"
#include "uwsn/topology.hpp"

namespace uwsn {

enum class Protocol { dsr, aodv, gpsr };

const char* to_string(Protocol protocol);
Protocol parse_protocol(const std::string& name);

/// Hop sequence from origin to destination, both inclusive.
struct SourceRoute {
  NodeId origin = 0;
  NodeId destination = 0;
  std::vector<NodeId> hops;
  double total_etx = 0.0;

  std::size_t hop_count() const { return hops.empty() ? 0 : hops.size() - 1; }
};

struct RouteFailure {
  NodeId destination = 0;
  std::string reason;
};

struct RoutingParams {
  std::uint32_t address_bytes = 2;     // S_a
  std::uint32_t coordinate_bytes = 4;  // S_c
};

/// Sink-side cost and per-node storage/packet overhead of one route computation.
struct OverheadLedger {
  std::uint64_t instruction_count = 0;      // sink-side RouteRequest/RouteReply/lookup invocations
  std::uint64_t control_messages = 0;       // network-side request/reply messages
  std::uint64_t distribution_messages = 0;  // route/table pushes from the sink
  std::uint64_t header_bytes_total = 0;     // DSR: sum over routes of S_a * N_h
  std::map<NodeId, std::uint64_t> per_node_table_bytes;
  std::uint64_t hole_fallbacks = 0;
  std::uint32_t address_bytes = 2;
  std::uint32_t coordinate_bytes = 4;

  std::uint64_t table_bytes_max() const;
  void merge(const OverheadLedger& other);
};

struct DsrResult {
  std::vector<SourceRoute> routes;
  std::vector<RouteFailure> failures;
  OverheadLedger ledger;
  std::vector<std::uint64_t> packet_header_bytes;  // per route, S_a * N_h
};

/// Centralized DSR: one ETX-metric flood from `origin` discovers every
/// destination. RouteRequest is evaluated in ascending (metric, hop sequence)
/// order and pruned when the node already holds an equal-or-better label.
DsrResult dsr_routes(const NetworkGraph& graph, NodeId origin, const std::vector<NodeId>& destinations,
                     const RoutingParams& params = {});

/// Flow key for next-hop entries.
struct FlowKey {
  NodeId source = 0;
  NodeId destination = 0;

  friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

struct NextHopTable {
  NodeId owner = 0;
  std::map<FlowKey, NodeId> entries;
  std::uint32_t own_entries = 0;         // flows this node originates
  std::uint32_t forwarding_entries = 0;  // N_i: flows of other nodes relayed here
};

struct AodvResult {
  std::map<NodeId, NextHopTable> tables;
  std::vector<RouteFailure> failures;
  OverheadLedger ledger;

  /// Walks installed next hops from `source` to `destination`. Returns nullopt
  /// on a missing entry or a chain longer than the node count.
  std::optional<std::vector<NodeId>> follow(NodeId source, NodeId destination, std::size_t node_count) const;
};

/// Centralized AODV: the same request flood, then a unicast reply from each
/// destination back along stored previous hops, installing next-hop entries.
AodvResult aodv_tables(const NetworkGraph& graph, NodeId origin, const std::vector<NodeId>& destinations,
                       const RoutingParams& params = {});

struct CoordTable {
  NodeId owner = 0;
  std::vector<std::pair<NodeId, Point>> entries;
};

struct GpsrResult {
  CoordTable table;
  OverheadLedger ledger;
};

/// Centralized GPSR: one coordinate lookup per destination, no control traffic.
GpsrResult gpsr_tables(const NetworkGraph& graph, NodeId origin, const std::vector<NodeId>& destinations,
                       const RoutingParams& params = {});

/// Neighbor strictly closer to `dest_coord` than `current`, or nullopt when
/// greedy forwarding is stuck. Ties go to the lower id.
std::optional<NodeId> gpsr_forward(NodeId current, Point dest_coord, const NetworkGraph& graph);

/// Minimum-ETX detour from a stuck node, standing in for perimeter routing.
SourceRoute resolve_gpsr_hole(const NetworkGraph& graph, NodeId stuck_node, NodeId dest);

struct GpsrDelivery {
  SourceRoute route;
  std::uint32_t hole_fallbacks = 0;
};

/// Greedy walk toward the destination's estimated coordinate, switching to
/// the sink-side detour at the first hole.
GpsrDelivery gpsr_deliver(const NetworkGraph& graph, NodeId origin, NodeId dest);

/// Dijkstra on ETX; equal-cost ties resolved to the lexicographically
/// smallest hop sequence. Throws unreachable.
SourceRoute shortest_etx_oracle(const NetworkGraph& graph, NodeId a, NodeId b);

struct Flow {
  NodeId origin = 0;
  std::vector<NodeId> destinations;
};

struct ControlMessageCounts {
  std::uint64_t request = 0;
  std::uint64_t reply = 0;
  std::uint64_t hello = 0;
  std::uint64_t distribution = 0;

  std::uint64_t total() const { return request + reply + hello + distribution; }
};

struct OverheadComparison {
  ControlMessageCounts traditional_aodv;
  ControlMessageCounts centralized;
  /// traditional request+reply per datum (0 when there are no flows)
  double traditional_per_datum = 0.0;
};

/// Network-side control traffic per sink trip. Traditional AODV floods one
/// request per datum (every node rebroadcasts once) and unicasts one reply per
/// destination along the path. The centralized variants send no requests or
/// replies: only `hello_rounds` HELLO beacons per node and one table
/// distribution message per node.
OverheadComparison distributed_overhead_model(const NetworkGraph& graph, const std::vector<Flow>& flows,
                                              std::uint32_t hello_rounds = 1);

void write_routes_csv(std::ostream& out, const std::vector<SourceRoute>& routes);
void write_next_hop_csv(std::ostream& out, const std::map<NodeId, NextHopTable>& tables);
void write_ledger_csv(std::ostream& out, const std::vector<std::pair<std::string, OverheadLedger>>& ledgers);

}  // namespace uwsn
