#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "uwsn/common.hpp"
#include "uwsn/rng.hpp"
#include "uwsn/topology.hpp"

namespace uwsn {

/// A sensed datum split into f_k opaque fragments, any f_d of which decode it.
struct DataItem {
  DataId data_id = 0;
  NodeId origin = 0;
  std::uint32_t f_k = 6;
  std::uint32_t f_d = 3;
};

void validate(const DataItem& data);

struct Dfk {
  double hops = 0.0;
  double meters = 0.0;
};

struct PlacementPlan {
  DataId data_id = 0;
  NodeId origin = 0;
  std::vector<NodeId> assignments;  // fragment index -> holder
  Dfk dfk;
  bool neighbor_violation = false;  // clustered re-selection gave up

  /// Distinct holders other than the origin, in fragment order.
  std::vector<NodeId> remote_holders() const;
};

/// Mean over all C(f_k, 2) fragment pairs of the hop distance and of the
/// Euclidean distance between position estimates.
Dfk compute_dfk(const PlacementPlan& plan, const NetworkGraph& graph);

/// Origin keeps fragment 0; f_k - 1 go to uniformly chosen 1-hop neighbors,
/// spilling into successive hop rings when the neighborhood is too small.
PlacementPlan place_near_first(const DataItem& data, const NetworkGraph& graph, Rng& rng);

/// Destinations are the f_k - 1 nodes farthest in hops from the origin, ties
/// broken at random.
PlacementPlan place_far_first(const DataItem& data, const NetworkGraph& graph, Rng& rng);

/// Destinations uniform without replacement over every other node.
PlacementPlan place_random(const DataItem& data, const NetworkGraph& graph, Rng& rng);

struct FixedDistanceOptions {
  double tolerance = 0.5;
  std::uint32_t cap = 1;                 // fragments of this datum per node
  std::uint32_t rejection_draws = 256;   // pure rejection-sampling budget
  std::uint32_t restarts = 32;           // local-search restarts after that
  std::uint32_t steps_per_restart = 400;
};

/// Placement whose d(f_k) in hops is within tolerance of `target_hops`.
/// Tries plain rejection sampling first, then a randomized local search.
/// Throws TargetUnreachableError with the closest value found.
PlacementPlan place_fixed_distance(const DataItem& data, const NetworkGraph& graph, double target_hops,
                                   const FixedDistanceOptions& options, Rng& rng);

struct Clustering {
  std::size_t k = 0;
  std::vector<Point> centroids;
  std::vector<std::size_t> membership;  // by graph index
  std::vector<double> wcss_history;     // within-cluster sum of squares after each iteration
  std::size_t iterations = 0;
  bool converged = false;

  std::size_t cluster_of(const NetworkGraph& graph, NodeId id) const { return membership[graph.index_of(id)]; }
  std::vector<NodeId> members(const NetworkGraph& graph, std::size_t cluster) const;
};

/// Lloyd's k-means over position estimates, seeded with k distinct random
/// nodes. Empty clusters take the point farthest from the largest cluster's
/// centroid.
Clustering kmeans_cluster(const NetworkGraph& graph, std::size_t k, Rng& rng, std::size_t max_iters = 100);

/// Lowest final WCSS over `restarts` independent k-means runs.
Clustering kmeans_best_of(const NetworkGraph& graph, std::size_t k, Rng& rng, std::size_t restarts,
                          std::size_t max_iters = 100);

struct ClusteredOptions {
  std::uint32_t retries = 32;
  /// When false the origin's cluster also draws a random holder, which
  /// receives the origin's fragment.
  bool origin_holds_own_cluster = true;
};

/// One holder per cluster; holders are never radio neighbors unless the
/// retry budget runs out, in which case `neighbor_violation` is set.
PlacementPlan place_clustered(const DataItem& data, const NetworkGraph& graph, const Clustering& clustering,
                              const ClusteredOptions& options, Rng& rng);

/// Best mean pairwise hop distance for f_k distinct nodes found by
/// multi-start swap hill climbing. If `origin` is set it is always included.
double max_dfk_search(const NetworkGraph& graph, std::uint32_t f_k, Rng& rng, std::optional<NodeId> origin = {},
                      std::uint32_t restarts = 24);

void write_plan_csv(std::ostream& out, const std::vector<PlacementPlan>& plans);
void write_clustering_csv(std::ostream& out, const NetworkGraph& graph, const Clustering& clustering);

}  // namespace uwsn
