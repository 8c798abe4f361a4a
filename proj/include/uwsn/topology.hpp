#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uwsn/common.hpp"

namespace uwsn {

struct SensorNode {
  NodeId id = 0;
  Point position;
  double tx_range = 0.0;
};

/// Directed radio link; exists only when the receiver is within the sender's range.
struct Link {
  NodeId from = 0;
  NodeId to = 0;
  double delivery_prob = 1.0;
};

/// Regular lattice metadata; node id = row * cols + col.
struct GridShape {
  std::size_t cols = 0;
  std::size_t rows = 0;
  double spacing = 0.0;
};

/// Ground-truth deployment: node positions, ranges, and directed links.
/// Immutable once built.
class Topology {
 public:
  Topology() = default;
  Topology(std::vector<SensorNode> nodes, std::vector<Link> links, std::optional<GridShape> grid = std::nullopt);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  const std::vector<SensorNode>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::optional<GridShape>& grid() const { return grid_; }

  bool contains(NodeId id) const { return index_.count(id) != 0; }
  std::size_t index_of(NodeId id) const;
  const SensorNode& node(NodeId id) const { return nodes_[index_of(id)]; }
  std::vector<NodeId> ids() const;

  /// Out-neighbors in ascending id order.
  const std::vector<NodeId>& neighbors(NodeId id) const { return adjacency_[index_of(id)]; }
  bool has_link(NodeId from, NodeId to) const;
  const Link* find_link(NodeId from, NodeId to) const;

  /// Grid spacing, or the median nearest-neighbor distance for irregular layouts.
  double nominal_spacing() const;

  /// Weakly connected components over the link set.
  std::size_t component_count() const;

 private:
  std::vector<SensorNode> nodes_;
  std::vector<Link> links_;
  std::optional<GridShape> grid_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::map<std::pair<NodeId, NodeId>, std::size_t> link_index_;
};

/// side x side nodes at (i * spacing, j * spacing); id = j * side + i.
Topology generate_grid(std::size_t side, double spacing, double tx_range, double delivery_prob = 1.0);

/// Corridor layout: count nodes along the x axis.
Topology generate_line(std::size_t count, double spacing, double tx_range, double delivery_prob = 1.0);

/// rows x cols rectangular grid, id = row * cols + col.
Topology generate_rect_grid(std::size_t cols, std::size_t rows, double spacing, double tx_range,
                            double delivery_prob = 1.0);

/// Links for every in-range ordered pair.
std::vector<Link> range_links(const std::vector<SensorNode>& nodes, double delivery_prob);

struct LoadedTopology {
  Topology topology;
  std::vector<std::string> warnings;
};

/// Parses the line-oriented topology format:
///   tx_range <meters>
///   delivery <prob>
///   node <id> <x> <y> [tx_range]
///   link <a> <b> <delivery_prob>
/// `#` starts a comment. Explicit links replace the range-derived set.
LoadedTopology parse_topology(std::istream& in);
LoadedTopology load_topology(const std::filesystem::path& path);
void write_topology(std::ostream& out, const Topology& topology);

// ---------------------------------------------------------------------------
// HELLO exchange and ETX

struct LinkEstimate {
  NodeId from = 0;
  NodeId to = 0;
  std::uint32_t rounds = 0;
  std::uint32_t received = 0;
  double etx_estimate = 1.0;

  bool heard() const { return received > 0; }
};

struct HelloResult {
  std::uint32_t rounds = 0;
  std::vector<LinkEstimate> links;  // sorted by (from, to)

  const LinkEstimate* find(NodeId from, NodeId to) const;
};

/// Each directed link receives `rounds` Bernoulli(delivery_prob) HELLO trials;
/// etx = rounds / max(1, received).
HelloResult simulate_hello_round(const Topology& topology, std::uint64_t rng_seed, std::uint32_t rounds);

/// Sink coordinates recorded at every HELLO reception, per node.
using SinkObservations = std::map<NodeId, std::vector<Point>>;

// ---------------------------------------------------------------------------
// Sink-side graph

struct GraphEdge {
  NodeId to = 0;
  double etx = 1.0;
};

struct GraphNode {
  NodeId id = 0;
  std::optional<Point> position;
  std::vector<GraphEdge> edges;  // ascending by `to`
};

/// The sink's world model: estimated positions plus ETX-weighted edges.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  explicit NetworkGraph(std::vector<GraphNode> nodes);

  std::size_t size() const { return nodes_.size(); }
  std::vector<NodeId> ids() const;
  bool contains(NodeId id) const { return index_.count(id) != 0; }
  std::size_t index_of(NodeId id) const;
  const GraphNode& node(NodeId id) const { return nodes_[index_of(id)]; }
  const GraphNode& node_at(std::size_t index) const { return nodes_[index]; }

  std::span<const GraphEdge> neighbors(NodeId id) const { return node(id).edges; }
  std::optional<double> etx(NodeId from, NodeId to) const;
  bool has_edge(NodeId from, NodeId to) const { return etx(from, to).has_value(); }

  const std::optional<Point>& position(NodeId id) const { return node(id).position; }
  /// Position estimate; throws missing-coordinate when absent.
  Point point(NodeId id) const;

  /// Unordered pairs (a < b) with edges in both directions.
  std::vector<std::pair<NodeId, NodeId>> bidirectional_edges() const;
  std::size_t directed_edge_count() const;

 private:
  std::vector<GraphNode> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
};

/// Positions are the mean of each node's observation points; an edge is kept
/// only when both directions were heard with etx below `etx_threshold`.
NetworkGraph build_sink_graph(const Topology& topology, const HelloResult& hello,
                              const SinkObservations& observations, double etx_threshold = 3.0);

/// True positions and every bidirectional in-range pair, etx = 1 / delivery_prob.
NetworkGraph ground_truth_graph(const Topology& topology);

struct WeightedEdge {
  NodeId a = 0;
  NodeId b = 0;
  double etx_ab = 1.0;
  double etx_ba = 1.0;
};

/// Graph with ids 0..positions.size()-1 and the given symmetric adjacency.
NetworkGraph make_graph(const std::vector<Point>& positions, const std::vector<WeightedEdge>& edges);

/// BFS hop counts from `source`, indexed by graph index; -1 when unreachable.
std::vector<int> hop_distances(const NetworkGraph& graph, NodeId source);

/// All-pairs hop counts by graph index.
class HopMatrix {
 public:
  explicit HopMatrix(const NetworkGraph& graph);

  int at(std::size_t i, std::size_t j) const { return hops_[i * n_ + j]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<int> hops_;
};

void write_graph_nodes_csv(std::ostream& out, const NetworkGraph& graph);
void write_graph_edges_csv(std::ostream& out, const NetworkGraph& graph);

}  // namespace uwsn
