#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace uwsn {

using NodeId = std::uint32_t;
using DataId = std::uint32_t;
using FragmentIndex = std::uint32_t;

/// Planar coordinate in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class ErrorCode {
  invalid_argument,
  duplicate_id,
  malformed_record,
  empty_topology,
  unknown_node,
  link_out_of_range,
  incomplete_graph,
  unreachable,
  placement_infeasible,
  target_unreachable,
  missing_route,
  missing_coordinate,
  invalid_config,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the sink never heard some nodes during its trip.
class IncompleteGraphError : public Error {
 public:
  explicit IncompleteGraphError(std::vector<NodeId> missing);

  const std::vector<NodeId>& missing() const noexcept { return missing_; }

 private:
  std::vector<NodeId> missing_;
};

/// Raised by the fixed-distance sampler; carries the closest d(f_k) it found.
class TargetUnreachableError : public Error {
 public:
  TargetUnreachableError(double target, double best_hops);

  double target() const noexcept { return target_; }
  double best_hops() const noexcept { return best_hops_; }

 private:
  double target_;
  double best_hops_;
};

}  // namespace uwsn
