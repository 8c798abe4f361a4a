#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "uwsn/mobility.hpp"

using namespace uwsn;

namespace {

AttackerState grid_attacker(const Topology& t, NodeId start, AttackerModel model = AttackerModel::manhattan) {
  return make_attacker(t, model, start, 10.0, 20.0, 100.0);
}

}  // namespace

TEST_SUITE("mobility") {
  TEST_CASE("sink trip over the reference grid") {
    auto t = generate_grid(10, 100, 120);
    auto trip = plan_sink_trip(t, 600);
    CHECK(trip.tour.size() == 100);
    CHECK(trip.visit_schedule.size() == 100);
    std::vector<double> times;
    for (const auto& [id, v] : trip.visit_schedule) {
      CHECK(v.size() == 1);
      times.push_back(v[0]);
    }
    std::sort(times.begin(), times.end());
    double max_gap = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) max_gap = std::max(max_gap, times[i] - times[i - 1]);
    CHECK(max_gap == doctest::Approx(6.0));
    CHECK(times.front() == 0.0);
    // boustrophedon: consecutive tour stops are grid neighbors
    for (std::size_t i = 1; i < trip.tour.size(); ++i) CHECK(t.has_link(trip.tour[i - 1], trip.tour[i]));
  }

  TEST_CASE("sink trip degenerate and line cases") {
    Topology single({{0, {5, 5}, 100}}, {});
    auto one = plan_sink_trip(single, 600);
    CHECK(one.visit_schedule.at(0) == std::vector<double>{0.0});

    auto line = generate_line(50, 100, 120);
    auto trip = plan_sink_trip(line, 600);
    for (std::size_t i = 0; i < trip.tour.size(); ++i) CHECK(trip.tour[i] == i);
    for (NodeId i = 1; i < 50; ++i) CHECK(trip.visit_schedule.at(i)[0] > trip.visit_schedule.at(i - 1)[0]);

    CHECK_THROWS_AS(plan_sink_trip(line, 0), Error);
  }

  TEST_CASE("observe trip hears every node") {
    for (auto t : {generate_grid(10, 100, 120), generate_rect_grid(10, 5, 100, 120), generate_line(50, 100, 120)}) {
      auto obs = observe_trip(t, plan_sink_trip(t, 600), 100 * std::sqrt(2.0), 50);
      CHECK(obs.size() == t.size());
      for (const auto& [id, pts] : obs)
        for (const Point& p : pts) CHECK(distance(p, t.node(id).position) <= 100 * std::sqrt(2.0) + 1e-9);
    }
  }

  TEST_CASE("attack timing on the reference grid") {
    auto t = generate_grid(10, 100, 120);
    Rng rng(1);
    CHECK(advance_attacker(grid_attacker(t, 55), t, 30, rng).attacked.size() == 1);
    CHECK(advance_attacker(grid_attacker(t, 55), t, 0, rng).attacked.empty());
    CHECK(advance_attacker(grid_attacker(t, 55), t, 90, rng).attacked.size() == 3);
    CHECK(advance_attacker(grid_attacker(t, 55), t, 29.9, rng).attacked.empty());
  }

  TEST_CASE("attack count is floor(T / round cost) for arbitrary splits") {
    auto t = generate_grid(10, 100, 120);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng draw(seed);
      const double total = draw.uniform() * 3000.0;
      auto state = grid_attacker(t, static_cast<NodeId>(draw.below(100)));
      Rng walk(seed + 1000);
      std::size_t attacks = 0;
      double done = 0.0;
      while (done < total) {
        const double chunk = std::min(total - done, draw.uniform() * 70.0);
        auto adv = advance_attacker(state, t, chunk, walk);
        attacks += adv.attacked.size();
        state = adv.state;
        done += chunk;
      }
      // guard against accumulated rounding exactly at a boundary
      const double cycles = total / 30.0;
      if (std::abs(cycles - std::round(cycles)) < 1e-6) continue;
      CHECK(attacks == static_cast<std::size_t>(std::floor(cycles)));
    }
  }

  TEST_CASE("manhattan walk stays on the grid and avoids backtracking") {
    auto t = generate_grid(10, 100, 120);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Rng rng(seed);
      auto state = grid_attacker(t, static_cast<NodeId>(rng.below(100)));
      std::vector<NodeId> path;
      for (int i = 0; i < 200; ++i) {
        auto step = step_attacker(state, t, rng);
        path.push_back(step.attacked);
        state = step.state;
      }
      for (std::size_t i = 1; i < path.size(); ++i) {
        REQUIRE(t.contains(path[i]));
        const Point a = t.node(path[i - 1]).position, b = t.node(path[i]).position;
        CHECK(distance(a, b) == doctest::Approx(100.0));
        if (i >= 2) CHECK(path[i] != path[i - 2]);  // every grid node has >= 2 orthogonal moves
      }
    }
  }

  TEST_CASE("same seed gives the same attacker path") {
    auto t = generate_grid(10, 100, 120);
    auto run = [&](std::uint64_t seed) {
      Rng rng(seed);
      auto adv = advance_attacker(grid_attacker(t, 12), t, 3000, rng);
      return adv.attacked;
    };
    CHECK(run(8) == run(8));
    CHECK(run(8) != run(9));
  }

  TEST_CASE("line sweep bounces at the ends") {
    auto t = generate_line(5, 100, 120);
    Rng rng(0);
    auto adv = advance_attacker(make_attacker(t, AttackerModel::line_sweep, 3, 10, 20, 100), t, 30 * 9, rng);
    CHECK(adv.attacked == std::vector<NodeId>{3, 4, 3, 2, 1, 0, 1, 2, 3});
    auto back = advance_attacker(make_attacker(t, AttackerModel::line_sweep, 4, 10, 20, 100, -1), t, 30 * 3, rng);
    CHECK(back.attacked == std::vector<NodeId>{4, 3, 2});
  }

  TEST_CASE("circular order covers every node, outer ring first") {
    auto t = generate_grid(6, 100, 120);
    auto order = circular_order(t);
    CHECK(order.size() == 36);
    CHECK(std::set<NodeId>(order.begin(), order.end()).size() == 36);
    for (std::size_t i = 0; i < 20; ++i) {  // the 20 boundary nodes of a 6x6 grid come first
      const Point p = t.node(order[i]).position;
      CHECK((p.x == 0 || p.x == 500 || p.y == 0 || p.y == 500));
    }
    Rng rng(0);
    auto adv = advance_attacker(make_attacker(t, AttackerModel::circular_sweep, order[0], 10, 20, 0), t, 36 * 100.0, rng);
    CHECK(adv.state.visited.size() == 36);
  }

  TEST_CASE("line order follows the principal axis") {
    auto t = generate_rect_grid(2, 6, 100, 120);
    auto order = line_order(t);
    for (std::size_t i = 1; i < order.size(); ++i)
      CHECK(t.node(order[i - 1]).position.y <= t.node(order[i]).position.y);
  }

  TEST_CASE("attacker path csv") {
    std::ostringstream out;
    write_attacker_path_csv(out, {{1, 0, 5}, {2, 1, 7}});
    CHECK(out.str() == "round,attacker_id,node_id\n1,0,5\n2,1,7\n");
    CHECK(parse_attacker_model("circular_sweep") == AttackerModel::circular_sweep);
    CHECK_THROWS_AS(parse_attacker_model("teleport"), Error);
  }
}
