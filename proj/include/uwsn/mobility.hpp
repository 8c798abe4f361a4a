#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "uwsn/common.hpp"
#include "uwsn/rng.hpp"
#include "uwsn/topology.hpp"

namespace uwsn {

/// One periodic trip of the itinerant sink.
struct SinkTrajectory {
  std::vector<NodeId> tour;      // collection order
  std::vector<Point> waypoints;  // node positions in tour order
  double trip_duration = 0.0;    // t_s
  std::map<NodeId, std::vector<double>> visit_schedule;  // trip-relative times in [0, t_s)
};

/// Boustrophedon over grid rows, nearest-neighbor tour otherwise. Visit times
/// are spread uniformly: tour position p is visited at p * t_s / n.
SinkTrajectory plan_sink_trip(const Topology& topology, double trip_duration);

/// Samples the sink's path every `sample_step` meters and records, for each
/// node within `reception_range` of a sample, the sink coordinate.
SinkObservations observe_trip(const Topology& topology, const SinkTrajectory& trajectory, double reception_range,
                              double sample_step);

enum class AttackerModel { manhattan, line_sweep, circular_sweep };

const char* to_string(AttackerModel model);
AttackerModel parse_attacker_model(const std::string& name);

/// A mobile adversary alternating travel (distance / speed) and seizure
/// (seizure_time) per node.
struct AttackerState {
  Point position;
  double speed = 10.0;
  double seizure_time = 20.0;
  AttackerModel model = AttackerModel::manhattan;
  std::set<NodeId> visited;

  NodeId target = 0;                // node being approached or seized
  std::optional<NodeId> came_from;  // last attacked node
  bool seizing = false;
  double phase_remaining = 0.0;     // seconds left in the current phase
  int direction = 1;                // sweep direction along `order`
  std::size_t order_pos = 0;
  std::shared_ptr<const std::vector<NodeId>> order;  // sweep models only
};

/// Attacker approaching `start` from `approach_distance` meters away, so its
/// first completed attack lands on `start` after approach/speed + seizure_time.
AttackerState make_attacker(const Topology& topology, AttackerModel model, NodeId start, double speed,
                            double seizure_time, double approach_distance, int direction = 1);

struct AttackerAdvance {
  AttackerState state;
  std::vector<NodeId> attacked;  // completed seizures, in order
};

AttackerAdvance advance_attacker(AttackerState state, const Topology& topology, double elapsed, Rng& rng);

struct AttackerStep {
  AttackerState state;
  NodeId attacked = 0;
  double elapsed = 0.0;
};

/// Advances exactly to the next completed seizure.
AttackerStep step_attacker(AttackerState state, const Topology& topology, Rng& rng);

/// Nodes sorted along the layout's principal axis.
std::vector<NodeId> line_order(const Topology& topology);

/// Outer-to-inner rings around the layout, each ring in ascending angle
/// about the centroid.
std::vector<NodeId> circular_order(const Topology& topology);

struct AttackPathRow {
  std::size_t round = 0;
  std::size_t attacker_id = 0;
  NodeId node_id = 0;
};

void write_attacker_path_csv(std::ostream& out, const std::vector<AttackPathRow>& rows);

}  // namespace uwsn
