#include "uwsn/common.hpp"

#include <sstream>

namespace uwsn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::duplicate_id: return "duplicate-id";
    case ErrorCode::malformed_record: return "malformed-record";
    case ErrorCode::empty_topology: return "empty-topology";
    case ErrorCode::unknown_node: return "unknown-node";
    case ErrorCode::link_out_of_range: return "link-out-of-range";
    case ErrorCode::incomplete_graph: return "incomplete-graph";
    case ErrorCode::unreachable: return "unreachable";
    case ErrorCode::placement_infeasible: return "placement-infeasible";
    case ErrorCode::target_unreachable: return "target-unreachable";
    case ErrorCode::missing_route: return "missing-route";
    case ErrorCode::missing_coordinate: return "missing-coordinate";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

namespace {

std::string describe_missing(const std::vector<NodeId>& missing) {
  std::ostringstream out;
  out << "sink graph incomplete; nodes never observed:";
  for (NodeId id : missing) out << ' ' << id;
  return out.str();
}

std::string describe_target(double target, double best) {
  std::ostringstream out;
  out << "d(f_k) target " << target << " unreachable; best achieved " << best;
  return out.str();
}

}  // namespace

IncompleteGraphError::IncompleteGraphError(std::vector<NodeId> missing)
    : Error(ErrorCode::incomplete_graph, describe_missing(missing)), missing_(std::move(missing)) {}

TargetUnreachableError::TargetUnreachableError(double target, double best_hops)
    : Error(ErrorCode::target_unreachable, describe_target(target, best_hops)),
      target_(target),
      best_hops_(best_hops) {}

}  // namespace uwsn
