#include "uwsn/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace uwsn {

namespace {

constexpr double kTimeEps = 1e-9;

}  // namespace

SinkTrajectory plan_sink_trip(const Topology& topology, double trip_duration) {
  if (topology.empty()) throw Error(ErrorCode::empty_topology, "cannot plan a sink trip over an empty topology");
  if (!(trip_duration > 0.0)) throw Error(ErrorCode::invalid_argument, "trip duration must be positive");

  SinkTrajectory trip;
  trip.trip_duration = trip_duration;
  if (const auto& grid = topology.grid()) {
    for (std::size_t r = 0; r < grid->rows; ++r) {
      for (std::size_t k = 0; k < grid->cols; ++k) {
        const std::size_t c = (r % 2 == 0) ? k : grid->cols - 1 - k;
        trip.tour.push_back(static_cast<NodeId>(r * grid->cols + c));
      }
    }
  } else {
    // Nearest-neighbor tour from the lowest (x, y) node.
    const auto& nodes = topology.nodes();
    std::vector<bool> used(nodes.size(), false);
    std::size_t current = 0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const auto& a = nodes[i].position;
      const auto& b = nodes[current].position;
      if (std::tie(a.x, a.y, nodes[i].id) < std::tie(b.x, b.y, nodes[current].id)) current = i;
    }
    for (std::size_t step = 0; step < nodes.size(); ++step) {
      used[current] = true;
      trip.tour.push_back(nodes[current].id);
      std::size_t best = nodes.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (used[j]) continue;
        const double d = distance(nodes[current].position, nodes[j].position);
        if (d < best_d || (d == best_d && nodes[j].id < nodes[best].id)) {
          best_d = d;
          best = j;
        }
      }
      if (best == nodes.size()) break;
      current = best;
    }
  }

  const double gap = trip_duration / static_cast<double>(trip.tour.size());
  for (std::size_t p = 0; p < trip.tour.size(); ++p) {
    trip.waypoints.push_back(topology.node(trip.tour[p]).position);
    trip.visit_schedule[trip.tour[p]].push_back(static_cast<double>(p) * gap);
  }
  for (NodeId id : topology.ids())
    if (!trip.visit_schedule.count(id))
      throw Error(ErrorCode::incomplete_graph, "sink trip misses node " + std::to_string(id));
  return trip;
}

SinkObservations observe_trip(const Topology& topology, const SinkTrajectory& trajectory, double reception_range,
                              double sample_step) {
  if (!(sample_step > 0.0)) throw Error(ErrorCode::invalid_argument, "sample step must be positive");
  std::vector<Point> samples;
  const auto& wp = trajectory.waypoints;
  for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
    const double len = distance(wp[i], wp[i + 1]);
    const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / sample_step)));
    for (std::size_t k = 0; k < pieces; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(pieces);
      samples.push_back({wp[i].x + t * (wp[i + 1].x - wp[i].x), wp[i].y + t * (wp[i + 1].y - wp[i].y)});
    }
  }
  if (!wp.empty()) samples.push_back(wp.back());

  SinkObservations obs;
  for (const Point& s : samples)
    for (const auto& n : topology.nodes())
      if (distance(s, n.position) <= reception_range) obs[n.id].push_back(s);
  return obs;
}

const char* to_string(AttackerModel model) {
  switch (model) {
    case AttackerModel::manhattan: return "manhattan";
    case AttackerModel::line_sweep: return "line_sweep";
    case AttackerModel::circular_sweep: return "circular_sweep";
  }
  return "unknown";
}

AttackerModel parse_attacker_model(const std::string& name) {
  if (name == "manhattan") return AttackerModel::manhattan;
  if (name == "line_sweep") return AttackerModel::line_sweep;
  if (name == "circular_sweep") return AttackerModel::circular_sweep;
  throw Error(ErrorCode::invalid_argument, "unknown attacker model '" + name + "'");
}

std::vector<NodeId> line_order(const Topology& topology) {
  std::vector<SensorNode> nodes = topology.nodes();
  if (nodes.empty()) return {};
  double min_x = nodes[0].position.x, max_x = min_x, min_y = nodes[0].position.y, max_y = min_y;
  for (const auto& n : nodes) {
    min_x = std::min(min_x, n.position.x);
    max_x = std::max(max_x, n.position.x);
    min_y = std::min(min_y, n.position.y);
    max_y = std::max(max_y, n.position.y);
  }
  const bool along_x = (max_x - min_x) >= (max_y - min_y);
  std::sort(nodes.begin(), nodes.end(), [&](const SensorNode& a, const SensorNode& b) {
    if (along_x) return std::tie(a.position.x, a.position.y, a.id) < std::tie(b.position.x, b.position.y, b.id);
    return std::tie(a.position.y, a.position.x, a.id) < std::tie(b.position.y, b.position.x, b.id);
  });
  std::vector<NodeId> out;
  for (const auto& n : nodes) out.push_back(n.id);
  return out;
}

std::vector<NodeId> circular_order(const Topology& topology) {
  const auto& nodes = topology.nodes();
  if (nodes.empty()) return {};
  double min_x = nodes[0].position.x, max_x = min_x, min_y = nodes[0].position.y, max_y = min_y;
  double cx = 0.0, cy = 0.0;
  for (const auto& n : nodes) {
    min_x = std::min(min_x, n.position.x);
    max_x = std::max(max_x, n.position.x);
    min_y = std::min(min_y, n.position.y);
    max_y = std::max(max_y, n.position.y);
    cx += n.position.x;
    cy += n.position.y;
  }
  cx /= static_cast<double>(nodes.size());
  cy /= static_cast<double>(nodes.size());
  double step = topology.nominal_spacing();
  if (!(step > 0.0)) step = 1.0;

  struct Key {
    long ring;
    double angle;
    NodeId id;
  };
  std::vector<Key> keys;
  for (const auto& n : nodes) {
    const auto& p = n.position;
    const double inset = std::min({p.x - min_x, max_x - p.x, p.y - min_y, max_y - p.y});
    double angle = std::atan2(p.y - cy, p.x - cx);
    if (angle < 0) angle += 2 * std::numbers::pi;
    keys.push_back({static_cast<long>(std::floor(inset / step + 1e-9)), angle, n.id});
  }
  std::sort(keys.begin(), keys.end(),
            [](const Key& a, const Key& b) { return std::tie(a.ring, a.angle, a.id) < std::tie(b.ring, b.angle, b.id); });
  std::vector<NodeId> out;
  for (const auto& k : keys) out.push_back(k.id);
  return out;
}

AttackerState make_attacker(const Topology& topology, AttackerModel model, NodeId start, double speed,
                            double seizure_time, double approach_distance, int direction) {
  if (!(speed > 0.0)) throw Error(ErrorCode::invalid_argument, "attacker speed must be positive");
  if (!(seizure_time >= 0.0)) throw Error(ErrorCode::invalid_argument, "seizure time must be non-negative");
  if (!(approach_distance >= 0.0)) throw Error(ErrorCode::invalid_argument, "approach distance must be non-negative");
  AttackerState state;
  state.position = topology.node(start).position;
  state.speed = speed;
  state.seizure_time = seizure_time;
  state.model = model;
  state.target = start;
  state.seizing = false;
  state.phase_remaining = approach_distance / speed;
  state.direction = direction >= 0 ? 1 : -1;
  if (model != AttackerModel::manhattan) {
    auto order = std::make_shared<const std::vector<NodeId>>(
        model == AttackerModel::line_sweep ? line_order(topology) : circular_order(topology));
    state.order_pos = static_cast<std::size_t>(std::find(order->begin(), order->end(), start) - order->begin());
    state.order = std::move(order);
  }
  return state;
}

namespace {

bool axis_aligned(Point a, Point b) {
  const double tol = 1e-6 * std::max(1.0, distance(a, b));
  return std::abs(a.x - b.x) <= tol || std::abs(a.y - b.y) <= tol;
}

NodeId choose_next(AttackerState& state, const Topology& topology, Rng& rng) {
  const NodeId here = state.target;
  switch (state.model) {
    case AttackerModel::manhattan: {
      const Point p = topology.node(here).position;
      std::vector<NodeId> options;
      for (NodeId n : topology.neighbors(here))
        if (axis_aligned(p, topology.node(n).position)) options.push_back(n);
      if (options.empty()) options = topology.neighbors(here);
      if (options.empty()) return here;
      if (state.came_from && options.size() > 1) {
        std::erase(options, *state.came_from);
        if (options.empty()) return *state.came_from;
      }
      return options[static_cast<std::size_t>(rng.below(options.size()))];
    }
    case AttackerModel::line_sweep: {
      const auto& order = *state.order;
      if (order.size() < 2) return here;
      auto next = static_cast<long>(state.order_pos) + state.direction;
      if (next < 0 || next >= static_cast<long>(order.size())) {
        state.direction = -state.direction;
        next = static_cast<long>(state.order_pos) + state.direction;
      }
      state.order_pos = static_cast<std::size_t>(next);
      return order[state.order_pos];
    }
    case AttackerModel::circular_sweep: {
      const auto& order = *state.order;
      const long n = static_cast<long>(order.size());
      state.order_pos = static_cast<std::size_t>(((static_cast<long>(state.order_pos) + state.direction) % n + n) % n);
      return order[state.order_pos];
    }
  }
  return here;
}

}  // namespace

AttackerAdvance advance_attacker(AttackerState state, const Topology& topology, double elapsed, Rng& rng) {
  if (!(elapsed >= 0.0)) throw Error(ErrorCode::invalid_argument, "elapsed time must be non-negative");
  AttackerAdvance result;
  double since_last_attack = 0.0;
  for (;;) {
    if (state.phase_remaining <= elapsed + kTimeEps) {
      elapsed = std::max(0.0, elapsed - state.phase_remaining);
      since_last_attack += state.phase_remaining;
      if (!state.seizing) {
        state.position = topology.node(state.target).position;
        state.seizing = true;
        state.phase_remaining = state.seizure_time;
        continue;
      }
      result.attacked.push_back(state.target);
      state.visited.insert(state.target);
      const NodeId here = state.target;
      const NodeId next = choose_next(state, topology, rng);
      state.came_from = here;
      state.target = next;
      state.seizing = false;
      state.phase_remaining = distance(topology.node(here).position, topology.node(next).position) / state.speed;
      // A zero-duration cycle (stationary attacker, instant seizure) completes
      // at most one attack per call.
      if (since_last_attack <= kTimeEps && state.phase_remaining + state.seizure_time <= kTimeEps) break;
      since_last_attack = 0.0;
    } else {
      if (!state.seizing && state.phase_remaining > 0.0) {
        const Point to = topology.node(state.target).position;
        const double frac = elapsed / state.phase_remaining;
        state.position.x += frac * (to.x - state.position.x);
        state.position.y += frac * (to.y - state.position.y);
      }
      state.phase_remaining -= elapsed;
      break;
    }
  }
  result.state = std::move(state);
  return result;
}

AttackerStep step_attacker(AttackerState state, const Topology& topology, Rng& rng) {
  const double elapsed = state.phase_remaining + (state.seizing ? 0.0 : state.seizure_time);
  AttackerAdvance adv = advance_attacker(std::move(state), topology, elapsed, rng);
  if (adv.attacked.empty()) throw Error(ErrorCode::invalid_argument, "attacker step completed no seizure");
  return {std::move(adv.state), adv.attacked.front(), elapsed};
}

void write_attacker_path_csv(std::ostream& out, const std::vector<AttackPathRow>& rows) {
  out << "round,attacker_id,node_id\n";
  for (const auto& r : rows) out << r.round << ',' << r.attacker_id << ',' << r.node_id << '\n';
}

}  // namespace uwsn
