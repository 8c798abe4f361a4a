#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "uwsn/routing.hpp"

using namespace uwsn;

namespace {

// a=0, b=1, c=2 on a line
NetworkGraph three_line() { return make_graph({{0, 0}, {100, 0}, {200, 0}}, {{0, 1, 1, 1}, {1, 2, 1, 1}}); }

// a=0, b=1, c=2, d=3; a-b-d costs 2, a-c-d costs 4
NetworkGraph diamond() {
  return make_graph({{0, 0}, {100, 100}, {100, -100}, {200, 0}},
                    {{0, 1, 1, 1}, {1, 3, 1, 1}, {0, 2, 1, 1}, {2, 3, 3, 3}});
}

void check_route_valid(const NetworkGraph& g, const SourceRoute& r) {
  REQUIRE_FALSE(r.hops.empty());
  CHECK(r.hops.front() == r.origin);
  CHECK(r.hops.back() == r.destination);
  CHECK(std::set<NodeId>(r.hops.begin(), r.hops.end()).size() == r.hops.size());
  CHECK(oracle::path_cost(g, r.hops) == doctest::Approx(r.total_etx));
}

std::vector<NodeId> pick_destinations(std::mt19937_64& gen, const NetworkGraph& g, NodeId origin, std::size_t m) {
  std::vector<NodeId> ids;
  for (NodeId id : g.ids())
    if (id != origin) ids.push_back(id);
  std::shuffle(ids.begin(), ids.end(), gen);
  ids.resize(std::min(m, ids.size()));
  return ids;
}

}  // namespace

TEST_SUITE("routing") {
  TEST_CASE("dsr on hand-built graphs") {
    auto line = dsr_routes(three_line(), 0, {2});
    REQUIRE(line.routes.size() == 1);
    CHECK(line.routes[0].hops == std::vector<NodeId>{0, 1, 2});
    CHECK(line.routes[0].total_etx == 2.0);
    CHECK(line.packet_header_bytes == std::vector<std::uint64_t>{4});

    auto dia = dsr_routes(diamond(), 0, {3});
    CHECK(dia.routes[0].hops == std::vector<NodeId>{0, 1, 3});
    CHECK(dia.routes[0].total_etx == 2.0);
  }

  TEST_CASE("dsr reports per-destination failures and still routes the rest") {
    auto g = make_graph({{0, 0}, {100, 0}, {900, 0}}, {{0, 1, 1, 1}});
    auto r = dsr_routes(g, 0, {1, 2, 7});
    CHECK(r.routes.size() == 1);
    REQUIRE(r.failures.size() == 2);
    CHECK(r.failures[0].destination == 2);
    CHECK(r.failures[1].destination == 7);
    auto self = dsr_routes(g, 0, {0});
    CHECK(self.routes[0].hop_count() == 0);
    CHECK(self.ledger.header_bytes_total == 0);
  }

  TEST_CASE("aodv on hand-built graphs") {
    auto r = aodv_tables(three_line(), 0, {2});
    CHECK(r.tables.at(0).entries.at({0, 2}) == 1);
    CHECK(r.tables.at(1).entries.at({0, 2}) == 2);
    CHECK(r.tables.at(1).forwarding_entries == 1);
    CHECK(r.tables.at(0).own_entries == 1);
    CHECK(r.ledger.per_node_table_bytes.at(0) == 4);
    CHECK(r.ledger.per_node_table_bytes.at(1) == 4);

    auto d = aodv_tables(diamond(), 0, {3});
    CHECK(*d.follow(0, 3, 4) == std::vector<NodeId>{0, 1, 3});

    auto self = aodv_tables(three_line(), 1, {1});
    CHECK(self.tables.empty());
    CHECK(self.ledger.control_messages == 0);
  }

  TEST_CASE("equal-cost ties resolve to the lexicographically smallest hop sequence") {
    // 0 -> {1,2} -> 3, all costs equal
    auto g = make_graph({{0, 0}, {1, 1}, {1, -1}, {2, 0}}, {{0, 2, 1, 1}, {0, 1, 1, 1}, {1, 3, 1, 1}, {2, 3, 1, 1}});
    CHECK(shortest_etx_oracle(g, 0, 3).hops == std::vector<NodeId>{0, 1, 3});
    CHECK(dsr_routes(g, 0, {3}).routes[0].hops == std::vector<NodeId>{0, 1, 3});
    CHECK(*aodv_tables(g, 0, {3}).follow(0, 3, 4) == std::vector<NodeId>{0, 1, 3});
    CHECK(shortest_etx_oracle(g, 3, 0).hops == std::vector<NodeId>{3, 1, 0});
    auto single = shortest_etx_oracle(three_line(), 0, 1);
    CHECK(single.hops == std::vector<NodeId>{0, 1});
    CHECK_THROWS_AS(shortest_etx_oracle(make_graph({{0, 0}, {1, 1}}, {}), 0, 1), Error);
  }

  TEST_CASE("dsr and aodv match Floyd-Warshall on random graphs") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 3 + static_cast<std::size_t>(gen() % 40);
      auto g = oracle::random_connected_graph(gen, n, 0.1);
      auto dist = oracle::floyd(g, false);
      const NodeId origin = static_cast<NodeId>(gen() % n);
      auto dests = pick_destinations(gen, g, origin, 1 + gen() % 8);
      auto dsr = dsr_routes(g, origin, dests);
      auto aodv = aodv_tables(g, origin, dests);
      REQUIRE(dsr.failures.empty());
      REQUIRE(aodv.failures.empty());
      for (std::size_t i = 0; i < dests.size(); ++i) {
        const double best = dist[g.index_of(origin)][g.index_of(dests[i])];
        check_route_valid(g, dsr.routes[i]);
        CHECK(dsr.routes[i].total_etx == doctest::Approx(best));
        auto path = aodv.follow(origin, dests[i], n);
        REQUIRE(path);
        CHECK(*path == dsr.routes[i].hops);
        CHECK(shortest_etx_oracle(g, origin, dests[i]).hops == dsr.routes[i].hops);
      }
    }
  }

  TEST_CASE("overhead formulas hold exactly") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 6 + static_cast<std::size_t>(gen() % 30);
      auto g = oracle::random_connected_graph(gen, n, 0.1);
      RoutingParams params{static_cast<std::uint32_t>(1 + gen() % 6), static_cast<std::uint32_t>(1 + gen() % 8)};
      const NodeId origin = static_cast<NodeId>(gen() % n);
      auto dests = pick_destinations(gen, g, origin, 5);

      auto dsr = dsr_routes(g, origin, dests, params);
      std::uint64_t header_sum = 0;
      for (std::size_t i = 0; i < dsr.routes.size(); ++i) {
        CHECK(dsr.packet_header_bytes[i] == params.address_bytes * dsr.routes[i].hop_count());
        header_sum += dsr.packet_header_bytes[i];
      }
      CHECK(dsr.ledger.header_bytes_total == header_sum);

      // recount next-hop entries independently from the installed paths
      auto aodv = aodv_tables(g, origin, dests, params);
      std::map<NodeId, std::uint64_t> forwarding;
      for (NodeId d : dests) {
        auto path = *aodv.follow(origin, d, n);
        for (std::size_t i = 1; i + 1 < path.size(); ++i) ++forwarding[path[i]];
      }
      for (const auto& [node, bytes] : aodv.ledger.per_node_table_bytes) {
        const std::uint64_t own = node == origin ? dests.size() : 0;
        CHECK(bytes == 2 * params.address_bytes * own + 2 * params.address_bytes * forwarding[node]);
      }

      auto gpsr = gpsr_tables(g, origin, dests, params);
      CHECK(gpsr.ledger.instruction_count == dests.size());
      CHECK(gpsr.ledger.control_messages == 0);
      CHECK(gpsr.ledger.per_node_table_bytes.at(origin) == 2 * params.coordinate_bytes * dests.size());
    }
  }

  TEST_CASE("gpsr table examples") {
    auto g = ground_truth_graph(generate_grid(10, 100, 120));
    auto t = gpsr_tables(g, 0, {1, 2, 3, 4, 5});
    CHECK(t.table.entries.size() == 5);
    CHECK(t.ledger.per_node_table_bytes.at(0) == 40);
    auto empty = gpsr_tables(g, 0, {});
    CHECK(empty.table.entries.empty());
    CHECK(empty.ledger.table_bytes_max() == 0);

    OverheadLedger total;
    for (NodeId origin : g.ids()) {
      std::vector<NodeId> dests;
      for (NodeId k = 1; k <= 5; ++k) dests.push_back((origin + k * 17) % 100);
      total.merge(gpsr_tables(g, origin, dests).ledger);
    }
    CHECK(total.instruction_count == 500);

    std::vector<GraphNode> nodes{{0, Point{0, 0}, {}}, {1, std::nullopt, {}}};
    NetworkGraph partial(nodes);
    CHECK_THROWS_AS(gpsr_tables(partial, 0, {1}), Error);
  }

  TEST_CASE("gpsr greedy forwarding") {
    auto g = ground_truth_graph(generate_grid(10, 100, 120));
    CHECK(gpsr_forward(44, {900, 400}, g) == 45);
    CHECK_FALSE(gpsr_forward(44, {410, 410}, g).has_value());

    // convex grid: no holes, walk length equals the hop distance
    const auto hops = oracle::floyd(g, true);
    std::uint64_t holes = 0;
    for (NodeId a : g.ids()) {
      for (NodeId b : g.ids()) {
        auto d = gpsr_deliver(g, a, b);
        holes += d.hole_fallbacks;
        CHECK(d.route.hop_count() == static_cast<std::size_t>(hops[g.index_of(a)][g.index_of(b)]));
      }
    }
    CHECK(holes == 0);
  }

  TEST_CASE("gpsr hole fallback") {
    // U-shaped corridor: 0 sits near 6 geometrically but must go around
    std::vector<Point> pos{{0, 0}, {0, 100}, {0, 200}, {100, 200}, {200, 200}, {200, 100}, {200, 0}};
    std::vector<WeightedEdge> edges;
    for (NodeId i = 0; i + 1 < pos.size(); ++i) edges.push_back({i, i + 1, 1, 1});
    auto g = make_graph(pos, edges);
    CHECK_FALSE(gpsr_forward(0, pos[6], g).has_value());
    auto d = gpsr_deliver(g, 0, 6);
    CHECK(d.hole_fallbacks == 1);
    check_route_valid(g, d.route);
    CHECK(d.route.total_etx == doctest::Approx(oracle::floyd(g, false)[0][6]));
    CHECK(resolve_gpsr_hole(g, 6, 6).hops == std::vector<NodeId>{6});
  }

  TEST_CASE("gpsr fallback on a line to an off-line node matches the oracle") {
    std::vector<Point> pos{{0, 0}, {100, 0}, {200, 0}, {300, 0}, {100, 300}};
    auto g = make_graph(pos, {{0, 1, 1, 1}, {1, 2, 1, 1}, {2, 3, 1.5, 1.5}, {3, 4, 2, 2}});
    auto detour = resolve_gpsr_hole(g, 1, 4);
    CHECK(detour.total_etx == doctest::Approx(oracle::floyd(g, false)[1][4]));
    check_route_valid(g, detour);
  }

  TEST_CASE("distributed overhead model") {
    auto g = ground_truth_graph(generate_line(50, 100, 120));
    auto one = distributed_overhead_model(g, {{0, {3}}});
    CHECK(one.traditional_aodv.request == 50);
    CHECK(one.traditional_aodv.reply == 3);
    CHECK(one.centralized.request == 0);
    CHECK(one.centralized.reply == 0);

    auto none = distributed_overhead_model(g, {});
    CHECK(none.traditional_aodv.request == 0);
    CHECK(none.traditional_aodv.reply == 0);
    CHECK(none.centralized.distribution == 0);
    CHECK(none.traditional_per_datum == 0.0);

    std::vector<Flow> flows;
    for (NodeId i = 0; i < 50; ++i) flows.push_back({i, {}});
    CHECK(distributed_overhead_model(g, flows).traditional_aodv.request == 2500);
  }

  TEST_CASE("csv writers") {
    auto r = dsr_routes(three_line(), 0, {2});
    std::ostringstream routes, next, ledger;
    write_routes_csv(routes, r.routes);
    CHECK(routes.str() == "origin,destination,hop_count,total_etx,hops\n0,2,2,2,0 1 2\n");
    write_next_hop_csv(next, aodv_tables(three_line(), 0, {2}).tables);
    CHECK(next.str() == "owner,source,destination,next_hop\n0,0,2,1\n1,0,2,2\n");
    write_ledger_csv(ledger, {{"dsr", r.ledger}});
    CHECK(ledger.str().rfind("protocol,instructions,control_msgs,header_bytes_total,table_bytes_max\ndsr,", 0) == 0);
    CHECK(parse_protocol("gpsr") == Protocol::gpsr);
    CHECK_THROWS_AS(parse_protocol("olsr"), Error);
  }
}
