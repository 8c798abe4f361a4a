#include "uwsn/topology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "uwsn/rng.hpp"

namespace uwsn {

// ---------------------------------------------------------------------------
// Topology

Topology::Topology(std::vector<SensorNode> nodes, std::vector<Link> links, std::optional<GridShape> grid)
    : nodes_(std::move(nodes)), links_(std::move(links)), grid_(grid) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SensorNode& n = nodes_[i];
    if (!(n.tx_range > 0.0))
      throw Error(ErrorCode::invalid_argument, "node " + std::to_string(n.id) + ": tx_range must be positive");
    if (!index_.emplace(n.id, i).second)
      throw Error(ErrorCode::duplicate_id, "duplicate node id " + std::to_string(n.id));
  }
  std::sort(links_.begin(), links_.end(),
            [](const Link& a, const Link& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
  adjacency_.assign(nodes_.size(), {});
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (!contains(l.from) || !contains(l.to))
      throw Error(ErrorCode::unknown_node,
                  "link " + std::to_string(l.from) + "->" + std::to_string(l.to) + " references an unknown node");
    if (l.from == l.to) throw Error(ErrorCode::malformed_record, "self link on node " + std::to_string(l.from));
    if (!(l.delivery_prob > 0.0 && l.delivery_prob <= 1.0))
      throw Error(ErrorCode::malformed_record, "delivery probability must be in (0,1]");
    const SensorNode& from = node(l.from);
    const SensorNode& to = node(l.to);
    if (distance(from.position, to.position) > from.tx_range * (1.0 + 1e-12))
      throw Error(ErrorCode::link_out_of_range,
                  "link " + std::to_string(l.from) + "->" + std::to_string(l.to) + " exceeds the sender's range");
    if (!link_index_.emplace(std::pair(l.from, l.to), i).second)
      throw Error(ErrorCode::malformed_record,
                  "duplicate link " + std::to_string(l.from) + "->" + std::to_string(l.to));
    adjacency_[index_of(l.from)].push_back(l.to);
  }
}

std::size_t Topology::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::unknown_node, "unknown node " + std::to_string(id));
  return it->second;
}

std::vector<NodeId> Topology::ids() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.id);
  return out;
}

bool Topology::has_link(NodeId from, NodeId to) const { return find_link(from, to) != nullptr; }

const Link* Topology::find_link(NodeId from, NodeId to) const {
  auto it = link_index_.find({from, to});
  return it == link_index_.end() ? nullptr : &links_[it->second];
}

double Topology::nominal_spacing() const {
  if (grid_) return grid_->spacing;
  if (nodes_.size() < 2) return 0.0;
  std::vector<double> nearest;
  for (const auto& a : nodes_) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : nodes_)
      if (a.id != b.id) best = std::min(best, distance(a.position, b.position));
    nearest.push_back(best);
  }
  std::nth_element(nearest.begin(), nearest.begin() + nearest.size() / 2, nearest.end());
  return nearest[nearest.size() / 2];
}

std::size_t Topology::component_count() const {
  std::vector<std::size_t> parent(nodes_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Link& l : links_) parent[find(index_of(l.from))] = find(index_of(l.to));
  std::size_t count = 0;
  for (std::size_t i = 0; i < parent.size(); ++i) count += find(i) == i;
  return count;
}

std::vector<Link> range_links(const std::vector<SensorNode>& nodes, double delivery_prob) {
  std::vector<Link> links;
  for (const auto& a : nodes)
    for (const auto& b : nodes)
      if (a.id != b.id && distance(a.position, b.position) <= a.tx_range) links.push_back({a.id, b.id, delivery_prob});
  return links;
}

namespace {

void check_layout_args(double spacing, double tx_range) {
  if (!(spacing > 0.0)) throw Error(ErrorCode::invalid_argument, "spacing must be positive");
  if (!(tx_range > 0.0)) throw Error(ErrorCode::invalid_argument, "tx_range must be positive");
}

}  // namespace

Topology generate_rect_grid(std::size_t cols, std::size_t rows, double spacing, double tx_range,
                            double delivery_prob) {
  check_layout_args(spacing, tx_range);
  if (cols == 0 || rows == 0) throw Error(ErrorCode::invalid_argument, "grid dimensions must be positive");
  std::vector<SensorNode> nodes;
  nodes.reserve(cols * rows);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      nodes.push_back({static_cast<NodeId>(r * cols + c),
                       {static_cast<double>(c) * spacing, static_cast<double>(r) * spacing},
                       tx_range});
  auto links = range_links(nodes, delivery_prob);
  return Topology(std::move(nodes), std::move(links), GridShape{cols, rows, spacing});
}

Topology generate_grid(std::size_t side, double spacing, double tx_range, double delivery_prob) {
  if (side < 2) throw Error(ErrorCode::invalid_argument, "grid side must be at least 2");
  return generate_rect_grid(side, side, spacing, tx_range, delivery_prob);
}

Topology generate_line(std::size_t count, double spacing, double tx_range, double delivery_prob) {
  check_layout_args(spacing, tx_range);
  if (count == 0) throw Error(ErrorCode::empty_topology, "line topology needs at least one node");
  std::vector<SensorNode> nodes;
  for (std::size_t i = 0; i < count; ++i)
    nodes.push_back({static_cast<NodeId>(i), {static_cast<double>(i) * spacing, 0.0}, tx_range});
  auto links = range_links(nodes, delivery_prob);
  return Topology(std::move(nodes), std::move(links));
}

// ---------------------------------------------------------------------------
// Topology file format

namespace {

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::malformed_record, "line " + std::to_string(line_no) + ": " + what);
}

template <class T>
T parse_field(std::istringstream& fields, std::size_t line_no, const char* name) {
  T value{};
  if (!(fields >> value)) malformed(line_no, std::string("expected ") + name);
  return value;
}

}  // namespace

LoadedTopology parse_topology(std::istream& in) {
  double default_range = 0.0;
  double default_delivery = 1.0;
  struct PendingNode {
    NodeId id;
    Point position;
    std::optional<double> range;
  };
  std::vector<PendingNode> pending;
  std::vector<Link> explicit_links;
  std::set<NodeId> seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;
    if (keyword == "tx_range") {
      default_range = parse_field<double>(fields, line_no, "range");
    } else if (keyword == "delivery") {
      default_delivery = parse_field<double>(fields, line_no, "probability");
    } else if (keyword == "node") {
      PendingNode n{};
      long long raw_id = parse_field<long long>(fields, line_no, "node id");
      if (raw_id < 0 || raw_id > std::numeric_limits<NodeId>::max()) malformed(line_no, "node id out of range");
      n.id = static_cast<NodeId>(raw_id);
      n.position.x = parse_field<double>(fields, line_no, "x");
      n.position.y = parse_field<double>(fields, line_no, "y");
      double range = 0.0;
      if (fields >> range) n.range = range;
      if (!seen.insert(n.id).second)
        throw Error(ErrorCode::duplicate_id, "line " + std::to_string(line_no) + ": duplicate node id " +
                                                 std::to_string(n.id));
      pending.push_back(n);
    } else if (keyword == "link") {
      auto a = parse_field<long long>(fields, line_no, "link endpoint");
      auto b = parse_field<long long>(fields, line_no, "link endpoint");
      double p = default_delivery;
      if (!(fields >> p)) p = default_delivery;
      if (a < 0 || b < 0) malformed(line_no, "negative node id");
      explicit_links.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), p});
      explicit_links.push_back({static_cast<NodeId>(b), static_cast<NodeId>(a), p});
    } else {
      malformed(line_no, "unknown record '" + keyword + "'");
    }
    std::string extra;
    if (fields >> extra) malformed(line_no, "trailing field '" + extra + "'");
  }

  if (pending.empty()) throw Error(ErrorCode::empty_topology, "topology has no nodes");

  std::vector<SensorNode> nodes;
  for (const auto& p : pending) {
    const double range = p.range.value_or(default_range);
    if (!(range > 0.0))
      throw Error(ErrorCode::malformed_record, "node " + std::to_string(p.id) + " has no positive tx_range");
    nodes.push_back({p.id, p.position, range});
  }
  for (const Link& l : explicit_links)
    if (!seen.count(l.from) || !seen.count(l.to))
      throw Error(ErrorCode::unknown_node, "link references unknown node " +
                                               std::to_string(seen.count(l.from) ? l.to : l.from));

  std::vector<Link> links = explicit_links.empty() ? range_links(nodes, default_delivery) : explicit_links;
  LoadedTopology result{Topology(std::move(nodes), std::move(links)), {}};
  if (const std::size_t parts = result.topology.component_count(); parts > 1)
    result.warnings.push_back("topology is disconnected (" + std::to_string(parts) + " components)");
  return result;
}

LoadedTopology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open topology file " + path.string());
  return parse_topology(in);
}

void write_topology(std::ostream& out, const Topology& topology) {
  out << "# " << topology.size() << " nodes\n";
  for (const auto& n : topology.nodes())
    out << "node " << n.id << ' ' << n.position.x << ' ' << n.position.y << ' ' << n.tx_range << '\n';
  for (const auto& l : topology.links())
    if (l.from < l.to) out << "link " << l.from << ' ' << l.to << ' ' << l.delivery_prob << '\n';
}

// ---------------------------------------------------------------------------
// HELLO / ETX

const LinkEstimate* HelloResult::find(NodeId from, NodeId to) const {
  auto it = std::lower_bound(links.begin(), links.end(), std::pair(from, to),
                             [](const LinkEstimate& l, const std::pair<NodeId, NodeId>& key) {
                               return std::pair(l.from, l.to) < key;
                             });
  if (it == links.end() || it->from != from || it->to != to) return nullptr;
  return &*it;
}

HelloResult simulate_hello_round(const Topology& topology, std::uint64_t rng_seed, std::uint32_t rounds) {
  if (rounds == 0) throw Error(ErrorCode::invalid_argument, "hello rounds must be at least 1");
  Rng rng = Rng::stream(rng_seed, "hello");
  HelloResult result;
  result.rounds = rounds;
  result.links.reserve(topology.links().size());
  for (const Link& l : topology.links()) {
    LinkEstimate est{l.from, l.to, rounds, 0, 0.0};
    if (l.delivery_prob >= 1.0) {
      est.received = rounds;
    } else {
      for (std::uint32_t r = 0; r < rounds; ++r) est.received += rng.bernoulli(l.delivery_prob) ? 1 : 0;
    }
    est.etx_estimate = static_cast<double>(rounds) / static_cast<double>(std::max<std::uint32_t>(1, est.received));
    result.links.push_back(est);
  }
  return result;
}

// ---------------------------------------------------------------------------
// NetworkGraph

NetworkGraph::NetworkGraph(std::vector<GraphNode> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (!index_.emplace(nodes_[i].id, i).second)
      throw Error(ErrorCode::duplicate_id, "duplicate graph node " + std::to_string(nodes_[i].id));
  for (auto& n : nodes_) {
    std::sort(n.edges.begin(), n.edges.end(), [](const GraphEdge& a, const GraphEdge& b) { return a.to < b.to; });
    for (const auto& e : n.edges) {
      if (!contains(e.to)) throw Error(ErrorCode::unknown_node, "edge to unknown node " + std::to_string(e.to));
      if (!(e.etx >= 1.0)) throw Error(ErrorCode::invalid_argument, "edge etx must be >= 1");
    }
  }
}

std::vector<NodeId> NetworkGraph::ids() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.id);
  return out;
}

std::size_t NetworkGraph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::unknown_node, "unknown node " + std::to_string(id));
  return it->second;
}

std::optional<double> NetworkGraph::etx(NodeId from, NodeId to) const {
  const auto& edges = node(from).edges;
  auto it = std::lower_bound(edges.begin(), edges.end(), to,
                             [](const GraphEdge& e, NodeId key) { return e.to < key; });
  if (it == edges.end() || it->to != to) return std::nullopt;
  return it->etx;
}

Point NetworkGraph::point(NodeId id) const {
  const auto& p = position(id);
  if (!p) throw Error(ErrorCode::missing_coordinate, "no coordinate estimate for node " + std::to_string(id));
  return *p;
}

std::vector<std::pair<NodeId, NodeId>> NetworkGraph::bidirectional_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& n : nodes_)
    for (const auto& e : n.edges)
      if (n.id < e.to && has_edge(e.to, n.id)) out.emplace_back(n.id, e.to);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t NetworkGraph::directed_edge_count() const {
  std::size_t count = 0;
  for (const auto& n : nodes_) count += n.edges.size();
  return count;
}

NetworkGraph build_sink_graph(const Topology& topology, const HelloResult& hello,
                              const SinkObservations& observations, double etx_threshold) {
  std::vector<NodeId> missing;
  std::vector<GraphNode> nodes;
  nodes.reserve(topology.size());
  for (const auto& sensor : topology.nodes()) {
    GraphNode g{sensor.id, std::nullopt, {}};
    auto it = observations.find(sensor.id);
    if (it == observations.end() || it->second.empty()) {
      missing.push_back(sensor.id);
      continue;
    }
    Point sum;
    for (const Point& p : it->second) {
      sum.x += p.x;
      sum.y += p.y;
    }
    const double count = static_cast<double>(it->second.size());
    g.position = Point{sum.x / count, sum.y / count};
    nodes.push_back(std::move(g));
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    throw IncompleteGraphError(std::move(missing));
  }

  auto usable = [&](const LinkEstimate* est) { return est && est->heard() && est->etx_estimate < etx_threshold; };
  for (auto& g : nodes) {
    for (NodeId to : topology.neighbors(g.id)) {
      const LinkEstimate* forward = hello.find(g.id, to);
      const LinkEstimate* reverse = hello.find(to, g.id);
      if (usable(forward) && usable(reverse)) g.edges.push_back({to, forward->etx_estimate});
    }
  }
  return NetworkGraph(std::move(nodes));
}

NetworkGraph ground_truth_graph(const Topology& topology) {
  std::vector<GraphNode> nodes;
  for (const auto& sensor : topology.nodes()) {
    GraphNode g{sensor.id, sensor.position, {}};
    for (NodeId to : topology.neighbors(sensor.id)) {
      if (!topology.has_link(to, sensor.id)) continue;
      g.edges.push_back({to, 1.0 / topology.find_link(sensor.id, to)->delivery_prob});
    }
    nodes.push_back(std::move(g));
  }
  return NetworkGraph(std::move(nodes));
}

NetworkGraph make_graph(const std::vector<Point>& positions, const std::vector<WeightedEdge>& edges) {
  std::vector<GraphNode> nodes(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    nodes[i].id = static_cast<NodeId>(i);
    nodes[i].position = positions[i];
  }
  for (const auto& e : edges) {
    if (e.a >= nodes.size() || e.b >= nodes.size()) throw Error(ErrorCode::unknown_node, "edge endpoint out of range");
    nodes[e.a].edges.push_back({e.b, e.etx_ab});
    nodes[e.b].edges.push_back({e.a, e.etx_ba});
  }
  return NetworkGraph(std::move(nodes));
}

std::vector<int> hop_distances(const NetworkGraph& graph, NodeId source) {
  std::vector<int> dist(graph.size(), -1);
  std::deque<std::size_t> queue;
  const std::size_t s = graph.index_of(source);
  dist[s] = 0;
  queue.push_back(s);
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& e : graph.node_at(u).edges) {
      const std::size_t v = graph.index_of(e.to);
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

HopMatrix::HopMatrix(const NetworkGraph& graph) : n_(graph.size()), hops_(n_ * n_, -1) {
  for (std::size_t i = 0; i < n_; ++i) {
    auto row = hop_distances(graph, graph.node_at(i).id);
    std::copy(row.begin(), row.end(), hops_.begin() + static_cast<std::ptrdiff_t>(i * n_));
  }
}

void write_graph_nodes_csv(std::ostream& out, const NetworkGraph& graph) {
  out << "node_id,x_est,y_est\n";
  for (NodeId id : graph.ids()) {
    const auto& p = graph.position(id);
    out << id << ',';
    if (p) out << p->x << ',' << p->y;
    else out << ',';
    out << '\n';
  }
}

void write_graph_edges_csv(std::ostream& out, const NetworkGraph& graph) {
  out << "from,to,etx\n";
  for (NodeId id : graph.ids())
    for (const auto& e : graph.neighbors(id)) out << id << ',' << e.to << ',' << e.etx << '\n';
}

}  // namespace uwsn
