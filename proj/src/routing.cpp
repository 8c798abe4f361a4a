#include "uwsn/routing.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <queue>

namespace uwsn {

const char* to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::dsr: return "dsr";
    case Protocol::aodv: return "aodv";
    case Protocol::gpsr: return "gpsr";
  }
  return "unknown";
}

Protocol parse_protocol(const std::string& name) {
  if (name == "dsr") return Protocol::dsr;
  if (name == "aodv") return Protocol::aodv;
  if (name == "gpsr") return Protocol::gpsr;
  throw Error(ErrorCode::invalid_argument, "unknown routing protocol '" + name + "'");
}

std::uint64_t OverheadLedger::table_bytes_max() const {
  std::uint64_t best = 0;
  for (const auto& [node, bytes] : per_node_table_bytes) best = std::max(best, bytes);
  return best;
}

void OverheadLedger::merge(const OverheadLedger& other) {
  instruction_count += other.instruction_count;
  control_messages += other.control_messages;
  distribution_messages += other.distribution_messages;
  header_bytes_total += other.header_bytes_total;
  hole_fallbacks += other.hole_fallbacks;
  for (const auto& [node, bytes] : other.per_node_table_bytes) per_node_table_bytes[node] += bytes;
}

namespace {

/// Best (metric, hop sequence) label, ordered lexicographically.
struct Label {
  double met = 0.0;
  std::vector<NodeId> path;  // origin .. node

  friend bool operator<(const Label& a, const Label& b) {
    if (a.met != b.met) return a.met < b.met;
    return a.path < b.path;
  }
};

struct Flood {
  std::vector<std::optional<Label>> best;  // by graph index
  std::uint64_t invocations = 0;
};

// RouteCreate/RouteRequest evaluated as a best-first label-correcting search.
// Each queued call is one RouteRequest invocation; a call is pruned when the
// node was already reached with an equal-or-better label.
Flood route_request_flood(const NetworkGraph& graph, NodeId origin) {
  Flood flood;
  flood.best.assign(graph.size(), std::nullopt);
  auto later = [](const Label& a, const Label& b) { return b < a; };
  std::priority_queue<Label, std::vector<Label>, decltype(later)> pending(later);

  for (const auto& e : graph.neighbors(origin)) pending.push({e.etx, {origin, e.to}});
  while (!pending.empty()) {
    Label call = pending.top();
    pending.pop();
    ++flood.invocations;
    const NodeId here = call.path.back();
    auto& stored = flood.best[graph.index_of(here)];
    if (stored && !(call < *stored)) continue;
    stored = call;
    for (const auto& e : graph.neighbors(here)) {
      if (std::find(call.path.begin(), call.path.end(), e.to) != call.path.end()) continue;
      Label next{call.met + e.etx, call.path};
      next.path.push_back(e.to);
      pending.push(std::move(next));
    }
  }
  return flood;
}

std::optional<std::string> check_destination(const NetworkGraph& graph, NodeId dest) {
  if (!graph.contains(dest)) return "unknown node";
  return std::nullopt;
}

}  // namespace

DsrResult dsr_routes(const NetworkGraph& graph, NodeId origin, const std::vector<NodeId>& destinations,
                     const RoutingParams& params) {
  DsrResult result;
  result.ledger.address_bytes = params.address_bytes;
  result.ledger.coordinate_bytes = params.coordinate_bytes;
  const Flood flood = route_request_flood(graph, origin);
  result.ledger.instruction_count = flood.invocations;

  for (NodeId dest : destinations) {
    if (auto problem = check_destination(graph, dest)) {
      result.failures.push_back({dest, *problem});
      continue;
    }
    SourceRoute route{origin, dest, {origin}, 0.0};
    if (dest != origin) {
      const auto& label = flood.best[graph.index_of(dest)];
      if (!label) {
        result.failures.push_back({dest, "unreachable"});
        continue;
      }
      route.hops = label->path;
      route.total_etx = label->met;
    }
    const std::uint64_t header = static_cast<std::uint64_t>(params.address_bytes) * route.hop_count();
    result.packet_header_bytes.push_back(header);
    result.ledger.header_bytes_total += header;
    result.routes.push_back(std::move(route));
  }
  return result;
}

std::optional<std::vector<NodeId>> AodvResult::follow(NodeId source, NodeId destination,
                                                      std::size_t node_count) const {
  std::vector<NodeId> path{source};
  NodeId current = source;
  while (current != destination) {
    auto table = tables.find(current);
    if (table == tables.end()) return std::nullopt;
    auto entry = table->second.entries.find({source, destination});
    if (entry == table->second.entries.end()) return std::nullopt;
    current = entry->second;
    path.push_back(current);
    if (path.size() > node_count + 1) return std::nullopt;
  }
  return path;
}

AodvResult aodv_tables(const NetworkGraph& graph, NodeId origin, const std::vector<NodeId>& destinations,
                       const RoutingParams& params) {
  AodvResult result;
  result.ledger.address_bytes = params.address_bytes;
  result.ledger.coordinate_bytes = params.coordinate_bytes;
  const Flood flood = route_request_flood(graph, origin);
  std::uint64_t replies = 0;

  auto previous_hop = [&](NodeId node) {
    const auto& path = flood.best[graph.index_of(node)]->path;
    return path[path.size() - 2];
  };

  for (NodeId dest : destinations) {
    if (auto problem = check_destination(graph, dest)) {
      result.failures.push_back({dest, *problem});
      continue;
    }
    if (dest == origin) continue;
    if (!flood.best[graph.index_of(dest)]) {
      result.failures.push_back({dest, "unreachable"});
      continue;
    }
    // RouteReply(src, dest, next, int) walking stored previous hops.
    NodeId next = dest;
    NodeId at = previous_hop(dest);
    for (;;) {
      ++replies;
      NextHopTable& table = result.tables[at];
      table.owner = at;
      const bool inserted = table.entries.insert_or_assign(FlowKey{origin, dest}, next).second;
      if (at == origin) {
        if (inserted) ++table.own_entries;
        break;
      }
      if (inserted) ++table.forwarding_entries;
      next = at;
      at = previous_hop(at);
    }
  }

  result.ledger.instruction_count = flood.invocations + replies;
  for (const auto& [node, table] : result.tables)
    result.ledger.per_node_table_bytes[node] =
        2ULL * params.address_bytes * (static_cast<std::uint64_t>(table.own_entries) + table.forwarding_entries);
  return result;
}

GpsrResult gpsr_tables(const NetworkGraph& graph, NodeId origin, const std::vector<NodeId>& destinations,
                       const RoutingParams& params) {
  GpsrResult result;
  result.ledger.address_bytes = params.address_bytes;
  result.ledger.coordinate_bytes = params.coordinate_bytes;
  result.table.owner = origin;
  (void)graph.index_of(origin);
  for (NodeId dest : destinations) {
    ++result.ledger.instruction_count;
    result.table.entries.emplace_back(dest, graph.point(dest));
  }
  result.ledger.per_node_table_bytes[origin] = 2ULL * params.coordinate_bytes * result.table.entries.size();
  return result;
}

std::optional<NodeId> gpsr_forward(NodeId current, Point dest_coord, const NetworkGraph& graph) {
  const double own = distance(graph.point(current), dest_coord);
  std::optional<NodeId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& e : graph.neighbors(current)) {
    const double d = distance(graph.point(e.to), dest_coord);
    if (d < best_d) {
      best_d = d;
      best = e.to;
    }
  }
  if (best && best_d < own) return best;
  return std::nullopt;
}

SourceRoute resolve_gpsr_hole(const NetworkGraph& graph, NodeId stuck_node, NodeId dest) {
  if (stuck_node == dest) return {stuck_node, dest, {dest}, 0.0};
  return shortest_etx_oracle(graph, stuck_node, dest);
}

GpsrDelivery gpsr_deliver(const NetworkGraph& graph, NodeId origin, NodeId dest) {
  GpsrDelivery out;
  out.route = {origin, dest, {origin}, 0.0};
  const Point target = graph.point(dest);
  NodeId current = origin;
  while (current != dest) {
    auto next = gpsr_forward(current, target, graph);
    if (!next) {
      const SourceRoute detour = resolve_gpsr_hole(graph, current, dest);
      out.route.hops.insert(out.route.hops.end(), detour.hops.begin() + 1, detour.hops.end());
      out.route.total_etx += detour.total_etx;
      out.hole_fallbacks = 1;
      break;
    }
    out.route.total_etx += *graph.etx(current, *next);
    out.route.hops.push_back(*next);
    current = *next;
  }
  return out;
}

SourceRoute shortest_etx_oracle(const NetworkGraph& graph, NodeId a, NodeId b) {
  const std::size_t n = graph.size();
  const std::size_t src = graph.index_of(a);
  const std::size_t dst = graph.index_of(b);
  std::vector<std::optional<Label>> label(n);
  std::vector<bool> done(n, false);
  label[src] = Label{0.0, {a}};
  for (;;) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && label[i] && (pick == n || *label[i] < *label[pick])) pick = i;
    if (pick == n) break;
    done[pick] = true;
    if (pick == dst) break;
    for (const auto& e : graph.node_at(pick).edges) {
      const std::size_t v = graph.index_of(e.to);
      if (done[v]) continue;
      Label candidate{label[pick]->met + e.etx, label[pick]->path};
      candidate.path.push_back(e.to);
      if (!label[v] || candidate < *label[v]) label[v] = std::move(candidate);
    }
  }
  if (!label[dst] || !done[dst])
    throw Error(ErrorCode::unreachable, "no route from " + std::to_string(a) + " to " + std::to_string(b));
  return {a, b, label[dst]->path, label[dst]->met};
}

OverheadComparison distributed_overhead_model(const NetworkGraph& graph, const std::vector<Flow>& flows,
                                              std::uint32_t hello_rounds) {
  OverheadComparison out;
  const std::uint64_t n = graph.size();
  for (const Flow& flow : flows) {
    out.traditional_aodv.request += n;
    for (NodeId dest : flow.destinations) {
      if (dest == flow.origin) continue;
      try {
        out.traditional_aodv.reply += shortest_etx_oracle(graph, flow.origin, dest).hop_count();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::unreachable) throw;
      }
    }
  }
  out.traditional_aodv.hello = n * hello_rounds;
  out.centralized.hello = n * hello_rounds;
  out.centralized.distribution = flows.empty() ? 0 : n;
  if (!flows.empty())
    out.traditional_per_datum = static_cast<double>(out.traditional_aodv.request + out.traditional_aodv.reply) /
                                static_cast<double>(flows.size());
  return out;
}

void write_routes_csv(std::ostream& out, const std::vector<SourceRoute>& routes) {
  out << "origin,destination,hop_count,total_etx,hops\n";
  for (const auto& r : routes) {
    out << r.origin << ',' << r.destination << ',' << r.hop_count() << ',' << r.total_etx << ',';
    for (std::size_t i = 0; i < r.hops.size(); ++i) out << (i ? " " : "") << r.hops[i];
    out << '\n';
  }
}

void write_next_hop_csv(std::ostream& out, const std::map<NodeId, NextHopTable>& tables) {
  out << "owner,source,destination,next_hop\n";
  for (const auto& [owner, table] : tables)
    for (const auto& [key, next] : table.entries)
      out << owner << ',' << key.source << ',' << key.destination << ',' << next << '\n';
}

void write_ledger_csv(std::ostream& out, const std::vector<std::pair<std::string, OverheadLedger>>& ledgers) {
  out << "protocol,instructions,control_msgs,header_bytes_total,table_bytes_max\n";
  for (const auto& [name, l] : ledgers)
    out << name << ',' << l.instruction_count << ',' << l.control_messages << ',' << l.header_bytes_total << ','
        << l.table_bytes_max() << '\n';
}

}  // namespace uwsn
