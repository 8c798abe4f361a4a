#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "uwsn/placement.hpp"

using namespace uwsn;

namespace {

NetworkGraph grid_graph(std::size_t side = 10) { return ground_truth_graph(generate_grid(side, 100, 120)); }

DataItem datum(NodeId origin, std::uint32_t f_k = 6, std::uint32_t f_d = 3) { return {0, origin, f_k, f_d}; }

bool on_boundary(const NetworkGraph& g, NodeId id) {
  const Point p = *g.position(id);
  return p.x == 0 || p.y == 0 || p.x == 900 || p.y == 900;
}

double wcss(const NetworkGraph& g, const std::vector<std::size_t>& membership, std::size_t k) {
  std::vector<Point> centre(k);
  std::vector<double> count(k, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    centre[membership[i]].x += g.node_at(i).position->x;
    centre[membership[i]].y += g.node_at(i).position->y;
    ++count[membership[i]];
  }
  for (std::size_t c = 0; c < k; ++c) centre[c] = {centre[c].x / count[c], centre[c].y / count[c]};
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = distance(*g.node_at(i).position, centre[membership[i]]);
    s += d * d;
  }
  return s;
}

}  // namespace

TEST_SUITE("placement") {
  TEST_CASE("validate data items") {
    CHECK_NOTHROW(validate(datum(0, 6, 6)));
    CHECK_THROWS_AS(validate(datum(0, 3, 4)), Error);
    CHECK_THROWS_AS(validate(datum(0, 3, 0)), Error);
  }

  TEST_CASE("compute_dfk basics") {
    auto g = grid_graph();
    PlacementPlan same{0, 44, {44, 44, 44}, {}, false};
    CHECK(compute_dfk(same, g).hops == 0.0);
    PlacementPlan pair{0, 44, {44, 45}, {}, false};
    auto d = compute_dfk(pair, g);
    CHECK(d.hops == 1.0);
    CHECK(d.meters == doctest::Approx(100.0));
    auto split = make_graph({{0, 0}, {1, 0}}, {});
    PlacementPlan broken{0, 0, {0, 1}, {}, false};
    CHECK_THROWS_AS(compute_dfk(broken, split), Error);
  }

  TEST_CASE("near-first on an interior origin") {
    auto g = grid_graph();
    const auto hops = oracle::floyd(g, true);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Rng rng(seed);
      auto five = place_near_first(datum(44, 5, 3), g, rng);
      std::set<NodeId> holders(five.assignments.begin(), five.assignments.end());
      CHECK(holders == std::set<NodeId>{34, 43, 44, 45, 54});

      auto six = place_near_first(datum(44), g, rng);
      REQUIRE(six.assignments.size() == 6);
      CHECK(six.assignments[0] == 44);
      int one = 0, two = 0;
      for (std::size_t i = 1; i < 6; ++i) {
        const double h = hops[g.index_of(44)][g.index_of(six.assignments[i])];
        one += h == 1.0;
        two += h == 2.0;
      }
      CHECK(one == 4);
      CHECK(two == 1);
      CHECK(six.dfk.hops == doctest::Approx(oracle::mean_pairwise(g, hops, six.assignments)));

      auto two_frag = place_near_first(datum(44, 2, 1), g, rng);
      CHECK(hops[g.index_of(44)][g.index_of(two_frag.assignments[1])] == 1.0);
    }
  }

  TEST_CASE("near-first infeasible on a tiny graph") {
    auto g = ground_truth_graph(generate_line(3, 100, 120));
    Rng rng(1);
    CHECK_THROWS_AS(place_near_first(datum(0, 6, 3), g, rng), Error);
  }

  TEST_CASE("far-first picks the farthest nodes") {
    auto g = grid_graph();
    Rng rng(3);
    CHECK(place_far_first(datum(0, 2, 1), g, rng).assignments == std::vector<NodeId>{0, 99});
    auto line = ground_truth_graph(generate_line(5, 100, 120));
    CHECK(place_far_first(datum(0, 3, 2), line, rng).assignments == std::vector<NodeId>{0, 4, 3});

    const auto hops = oracle::floyd(g, true);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng r(seed);
      const NodeId origin = static_cast<NodeId>(11 + 10 * (seed % 8) + seed % 7);
      auto plan = place_far_first(datum(origin), g, r);
      std::set<NodeId> chosen(plan.assignments.begin() + 1, plan.assignments.end());
      double min_chosen = 1e9, max_other = 0;
      for (NodeId id : g.ids()) {
        if (id == origin) continue;
        const double h = hops[g.index_of(origin)][g.index_of(id)];
        if (chosen.count(id)) min_chosen = std::min(min_chosen, h);
        else max_other = std::max(max_other, h);
      }
      CHECK(min_chosen >= max_other);
      // the two farthest nodes from any origin lie on the boundary
      auto pair = place_far_first(datum(origin, 3, 2), g, r);
      CHECK(on_boundary(g, pair.assignments[1]));
      CHECK(on_boundary(g, pair.assignments[2]));
    }
  }

  TEST_CASE("random placement") {
    auto g = grid_graph();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Rng rng(seed);
      auto plan = place_random(datum(17), g, rng);
      std::set<NodeId> s(plan.assignments.begin(), plan.assignments.end());
      CHECK(s.size() == 6);
      CHECK(plan.assignments[0] == 17);
    }
    auto small = grid_graph(2);
    Rng rng(1);
    auto all = place_random(datum(2, 4, 2), small, rng);
    CHECK(std::set<NodeId>(all.assignments.begin(), all.assignments.end()) == std::set<NodeId>{0, 1, 2, 3});
    CHECK_THROWS_AS(place_random(datum(2, 5, 2), small, rng), Error);
  }

  TEST_CASE("every plan has f_k distinct holders and d(f_k) >= 1") {
    auto g = grid_graph();
    auto clustering_rng = Rng(5);
    auto clusters = kmeans_cluster(g, 6, clustering_rng);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      Rng rng(seed);
      const NodeId origin = static_cast<NodeId>(rng.below(100));
      std::vector<PlacementPlan> plans{place_near_first(datum(origin), g, rng), place_far_first(datum(origin), g, rng),
                                       place_random(datum(origin), g, rng),
                                       place_clustered(datum(origin), g, clusters, {}, rng)};
      for (const auto& p : plans) {
        CHECK(p.assignments.size() == 6);
        CHECK(std::set<NodeId>(p.assignments.begin(), p.assignments.end()).size() == 6);
        CHECK(p.dfk.hops >= 1.0);
      }
    }
  }

  TEST_CASE("fixed-distance hits targets within tolerance") {
    auto g = grid_graph();
    const auto hops = oracle::floyd(g, true);
    for (double target : {2.0, 3.0, 4.0, 6.0, 8.0, 10.0}) {
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Rng rng(seed * 31 + static_cast<std::uint64_t>(target));
        const NodeId origin = seed % 2 ? 0 : 45;
        PlacementPlan plan;
        try {
          plan = place_fixed_distance(datum(origin), g, target, {}, rng);
        } catch (const TargetUnreachableError&) {
          continue;  // a central origin cannot reach the largest targets
        }
        CHECK(std::abs(oracle::mean_pairwise(g, hops, plan.assignments) - target) <= 0.5);
        CHECK(std::set<NodeId>(plan.assignments.begin(), plan.assignments.end()).size() == 6);
      }
    }
    Rng rng(2);
    CHECK_NOTHROW(place_fixed_distance(datum(0), g, 10.0, {}, rng));
  }

  TEST_CASE("fixed-distance with the cap lifted can stack everything on the origin") {
    auto g = grid_graph();
    Rng rng(9);
    FixedDistanceOptions opts;
    opts.cap = 6;
    opts.tolerance = 0.0;
    auto plan = place_fixed_distance(datum(12), g, 0.0, opts, rng);
    for (NodeId id : plan.assignments) CHECK(id == 12);
  }

  TEST_CASE("fixed-distance respects the per-node cap") {
    auto g = grid_graph();
    FixedDistanceOptions opts;
    opts.cap = 2;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      auto plan = place_fixed_distance(datum(33), g, 1.0, opts, rng);
      std::map<NodeId, int> load;
      for (NodeId id : plan.assignments) ++load[id];
      for (auto [id, c] : load) CHECK(c <= 2);
    }
  }

  TEST_CASE("fixed-distance reports the best value when unreachable") {
    auto g = grid_graph();
    Rng rng(4);
    try {
      place_fixed_distance(datum(0), g, 50.0, {}, rng);
      FAIL("expected target-unreachable");
    } catch (const TargetUnreachableError& e) {
      CHECK(e.code() == ErrorCode::target_unreachable);
      CHECK(e.best_hops() > 8.0);
      CHECK(e.best_hops() < 12.0);
    }
  }

  TEST_CASE("k-means: quadrants, degenerate k, monotone WCSS") {
    auto g = grid_graph();
    Rng rng(1);
    auto four = kmeans_best_of(g, 4, rng, 10);
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(four.members(g, c).size() >= 20);
      CHECK(four.members(g, c).size() <= 30);
    }
    auto one = kmeans_cluster(g, 1, rng);
    CHECK(one.centroids[0].x == doctest::Approx(450));
    CHECK(one.centroids[0].y == doctest::Approx(450));
    auto all = kmeans_cluster(g, 100, rng);
    std::set<std::size_t> distinct(all.membership.begin(), all.membership.end());
    CHECK(distinct.size() == 100);
    CHECK_THROWS_AS(kmeans_cluster(g, 0, rng), Error);

    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Rng r(seed);
      const std::size_t k = 2 + seed % 7;
      auto c = kmeans_cluster(g, k, r);
      for (std::size_t i = 1; i < c.wcss_history.size(); ++i)
        CHECK(c.wcss_history[i] <= c.wcss_history[i - 1] + 1e-6);
      CHECK(c.wcss_history.back() == doctest::Approx(wcss(g, c.membership, k)));
      CHECK(std::set<std::size_t>(c.membership.begin(), c.membership.end()).size() == k);
      if (c.converged) {
        // each point sits with its nearest centroid (ties allowed)
        for (std::size_t i = 0; i < g.size(); ++i) {
          const Point p = *g.node_at(i).position;
          const double own = distance(p, c.centroids[c.membership[i]]);
          for (const Point& other : c.centroids) CHECK(own <= distance(p, other) + 1e-9);
        }
      }
    }
  }

  TEST_CASE("best-of restarts never worsens WCSS") {
    auto g = grid_graph();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng a(seed), b(seed);
      auto single = kmeans_cluster(g, 6, a);
      auto best = kmeans_best_of(g, 6, b, 8);
      CHECK(best.wcss_history.back() <= single.wcss_history.back() + 1e-9);
    }
  }

  TEST_CASE("clustered placement: one holder per cluster, no adjacent holders") {
    auto g = grid_graph();
    Rng crng(2);
    auto four = kmeans_best_of(g, 4, crng, 10);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(seed);
      const NodeId origin = static_cast<NodeId>(rng.below(100));
      auto plan = place_clustered(datum(origin, 4, 2), g, four, {}, rng);
      CHECK(plan.assignments[0] == origin);
      std::set<std::size_t> clusters;
      for (NodeId id : plan.assignments) clusters.insert(four.cluster_of(g, id));
      CHECK(clusters.size() == 4);
      if (!plan.neighbor_violation)
        for (NodeId a : plan.assignments)
          for (NodeId b : plan.assignments) CHECK_FALSE(g.has_edge(a, b));
    }
  }

  TEST_CASE("clustered placement: two clusters and the alternative origin reading") {
    auto g = grid_graph();
    Clustering two;
    two.k = 2;
    for (std::size_t i = 0; i < g.size(); ++i) two.membership.push_back(g.node_at(i).position->x < 500 ? 0 : 1);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng rng(seed);
      auto plan = place_clustered(datum(0, 2, 1), g, two, {}, rng);
      CHECK(plan.assignments[0] == 0);
      CHECK(two.cluster_of(g, plan.assignments[1]) == 1);

      ClusteredOptions alt;
      alt.origin_holds_own_cluster = false;
      auto other = place_clustered(datum(0, 2, 1), g, two, alt, rng);
      CHECK(two.cluster_of(g, other.assignments[0]) == 0);
      CHECK(two.cluster_of(g, other.assignments[1]) == 1);
    }
    Rng rng(0);
    CHECK_THROWS_AS(place_clustered(datum(0, 3, 1), g, two, {}, rng), Error);
  }

  TEST_CASE("clustered placement flags unavoidable adjacency") {
    auto g = ground_truth_graph(generate_line(3, 100, 120));
    Clustering c;
    c.k = 3;
    c.membership = {0, 1, 2};
    Rng rng(1);
    auto plan = place_clustered(datum(0, 3, 2), g, c, {}, rng);
    CHECK(plan.neighbor_violation);
  }

  TEST_CASE("adjacency re-draw over touching clusters") {
    // stripes one column wide: every cluster borders the next
    auto g = grid_graph(6);
    Clustering stripes;
    stripes.k = 3;
    for (std::size_t i = 0; i < g.size(); ++i)
      stripes.membership.push_back(static_cast<std::size_t>(g.node_at(i).position->x / 100) % 3);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng(seed);
      auto plan = place_clustered(datum(static_cast<NodeId>(seed % 36), 3, 2), g, stripes, {}, rng);
      REQUIRE_FALSE(plan.neighbor_violation);
      for (NodeId a : plan.assignments)
        for (NodeId b : plan.assignments) CHECK_FALSE(g.has_edge(a, b));
    }
  }

  TEST_CASE("strategy ordering of mean d(f_k)") {
    auto g = grid_graph();
    Rng crng(7);
    auto six = kmeans_best_of(g, 6, crng, 10);
    double near = 0, clustered = 0, far = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(seed);
      const NodeId origin = static_cast<NodeId>(rng.below(100));
      near += place_near_first(datum(origin), g, rng).dfk.hops;
      clustered += place_clustered(datum(origin), g, six, {}, rng).dfk.hops;
      far += place_far_first(datum(origin), g, rng).dfk.hops;
    }
    CHECK(near < clustered);
    CHECK(near < far);
    // far-first bunches its holders in the corner opposite the origin, so
    // clustered spreads wider than it on this grid
    CHECK(clustered > far);
  }

  TEST_CASE("max d(f_k) search matches brute force on small grids") {
    for (std::size_t side : {3, 4}) {
      auto g = grid_graph(side);
      for (std::uint32_t k : {2u, 3u, 4u}) {
        Rng rng(k);
        CHECK(max_dfk_search(g, k, rng) == doctest::Approx(oracle::brute_max_dfk(g, k)));
      }
    }
  }

  TEST_CASE("plan and clustering csv") {
    std::ostringstream out;
    write_plan_csv(out, {PlacementPlan{3, 1, {1, 2}, {}, false}});
    CHECK(out.str() == "data_id,fragment_index,node_id\n3,0,1\n3,1,2\n");
    auto g = grid_graph(2);
    Clustering c;
    c.k = 1;
    c.membership = {0, 0, 0, 0};
    std::ostringstream cl;
    write_clustering_csv(cl, g, c);
    CHECK(cl.str() == "node_id,cluster\n0,0\n1,0\n2,0\n3,0\n");
  }
}
