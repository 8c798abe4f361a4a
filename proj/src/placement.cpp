#include "uwsn/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

namespace uwsn {

void validate(const DataItem& data) {
  if (data.f_k < 1) throw Error(ErrorCode::invalid_argument, "f_k must be at least 1");
  if (data.f_d < 1 || data.f_d > data.f_k)
    throw Error(ErrorCode::invalid_argument, "f_d must satisfy 1 <= f_d <= f_k");
}

std::vector<NodeId> PlacementPlan::remote_holders() const {
  std::vector<NodeId> out;
  for (NodeId n : assignments)
    if (n != origin && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  return out;
}

Dfk compute_dfk(const PlacementPlan& plan, const NetworkGraph& graph) {
  const auto& holders = plan.assignments;
  const std::size_t k = holders.size();
  if (k < 2) return {};
  std::map<NodeId, std::vector<int>> bfs;
  for (NodeId h : holders)
    if (!bfs.count(h)) bfs.emplace(h, hop_distances(graph, h));
  double hop_sum = 0.0, meter_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const int h = bfs.at(holders[i])[graph.index_of(holders[j])];
      if (h < 0)
        throw Error(ErrorCode::unreachable, "fragment holders " + std::to_string(holders[i]) + " and " +
                                                std::to_string(holders[j]) + " are not connected");
      hop_sum += h;
      meter_sum += distance(graph.point(holders[i]), graph.point(holders[j]));
    }
  }
  const double pairs = static_cast<double>(k * (k - 1) / 2);
  return {hop_sum / pairs, meter_sum / pairs};
}

namespace {

PlacementPlan make_plan(const DataItem& data, std::vector<NodeId> remote, const NetworkGraph& graph) {
  PlacementPlan plan;
  plan.data_id = data.data_id;
  plan.origin = data.origin;
  plan.assignments.reserve(data.f_k);
  plan.assignments.push_back(data.origin);
  plan.assignments.insert(plan.assignments.end(), remote.begin(), remote.end());
  plan.dfk = compute_dfk(plan, graph);
  return plan;
}

[[noreturn]] void infeasible(const DataItem& data, std::size_t available) {
  throw Error(ErrorCode::placement_infeasible,
              "datum " + std::to_string(data.data_id) + " needs " + std::to_string(data.f_k - 1) +
                  " remote holders but only " + std::to_string(available) + " are available");
}

}  // namespace

PlacementPlan place_near_first(const DataItem& data, const NetworkGraph& graph, Rng& rng) {
  validate(data);
  const std::size_t need = data.f_k - 1;
  const auto dist = hop_distances(graph, data.origin);
  std::map<int, std::vector<NodeId>> rings;
  for (std::size_t i = 0; i < graph.size(); ++i)
    if (dist[i] > 0) rings[dist[i]].push_back(graph.node_at(i).id);

  std::vector<NodeId> chosen;
  for (auto& [hop, ring] : rings) {
    if (chosen.size() == need) break;
    const std::size_t missing = need - chosen.size();
    if (ring.size() <= missing) {
      chosen.insert(chosen.end(), ring.begin(), ring.end());
    } else {
      auto picked = rng.sample(ring, missing);
      chosen.insert(chosen.end(), picked.begin(), picked.end());
    }
  }
  if (chosen.size() < need) infeasible(data, chosen.size());
  return make_plan(data, std::move(chosen), graph);
}

PlacementPlan place_far_first(const DataItem& data, const NetworkGraph& graph, Rng& rng) {
  validate(data);
  const std::size_t need = data.f_k - 1;
  const auto dist = hop_distances(graph, data.origin);
  std::vector<NodeId> candidates;
  for (std::size_t i = 0; i < graph.size(); ++i)
    if (dist[i] > 0) candidates.push_back(graph.node_at(i).id);
  if (candidates.size() < need) infeasible(data, candidates.size());
  rng.shuffle(candidates);
  std::stable_sort(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
    return dist[graph.index_of(a)] > dist[graph.index_of(b)];
  });
  candidates.resize(need);
  return make_plan(data, std::move(candidates), graph);
}

PlacementPlan place_random(const DataItem& data, const NetworkGraph& graph, Rng& rng) {
  validate(data);
  const std::size_t need = data.f_k - 1;
  std::vector<NodeId> pool;
  for (NodeId id : graph.ids())
    if (id != data.origin) pool.push_back(id);
  if (pool.size() < need) infeasible(data, pool.size());
  return make_plan(data, rng.sample(std::move(pool), need), graph);
}

// ---------------------------------------------------------------------------
// Fixed-distance placement

namespace {

class PairSum {
 public:
  PairSum(const HopMatrix& hops, std::vector<std::size_t> holders) : hops_(hops), holders_(std::move(holders)) {
    for (std::size_t i = 0; i < holders_.size(); ++i)
      for (std::size_t j = i + 1; j < holders_.size(); ++j) sum_ += hops_.at(holders_[i], holders_[j]);
  }

  long sum() const { return sum_; }
  const std::vector<std::size_t>& holders() const { return holders_; }

  long sum_if_replaced(std::size_t slot, std::size_t node) const {
    long s = sum_;
    for (std::size_t j = 0; j < holders_.size(); ++j) {
      if (j == slot) continue;
      s += hops_.at(node, holders_[j]) - hops_.at(holders_[slot], holders_[j]);
    }
    return s;
  }

  void replace(std::size_t slot, std::size_t node) {
    sum_ = sum_if_replaced(slot, node);
    holders_[slot] = node;
  }

 private:
  const HopMatrix& hops_;
  std::vector<std::size_t> holders_;
  long sum_ = 0;
};

}  // namespace

PlacementPlan place_fixed_distance(const DataItem& data, const NetworkGraph& graph, double target_hops,
                                   const FixedDistanceOptions& options, Rng& rng) {
  validate(data);
  if (options.cap < 1) throw Error(ErrorCode::invalid_argument, "per-node cap must be at least 1");
  const HopMatrix hops(graph);
  const std::size_t origin = graph.index_of(data.origin);
  const std::size_t k = data.f_k;

  std::vector<std::size_t> component;
  for (std::size_t i = 0; i < graph.size(); ++i)
    if (hops.at(origin, i) >= 0) component.push_back(i);
  if (component.size() * options.cap < k) infeasible(data, component.size() * options.cap - 1);

  auto to_plan = [&](const std::vector<std::size_t>& holders) {
    std::vector<NodeId> remote;
    for (std::size_t i = 1; i < holders.size(); ++i) remote.push_back(graph.node_at(holders[i]).id);
    return make_plan(data, std::move(remote), graph);
  };
  if (k == 1) {
    if (std::abs(target_hops) <= options.tolerance) return to_plan({origin});
    throw TargetUnreachableError(target_hops, 0.0);
  }

  // With the cap lifted, stacking every fragment on the origin gives d(f_k) = 0.
  if (options.cap >= k && std::abs(target_hops) <= options.tolerance)
    return to_plan(std::vector<std::size_t>(k, origin));

  const double pairs = static_cast<double>(k * (k - 1) / 2);
  auto gap = [&](long sum) { return std::abs(static_cast<double>(sum) / pairs - target_hops); };

  std::vector<std::uint32_t> load(graph.size(), 0);
  auto draw = [&]() {
    std::fill(load.begin(), load.end(), 0);
    std::vector<std::size_t> holders{origin};
    load[origin] = 1;
    while (holders.size() < k) {
      const std::size_t c = component[static_cast<std::size_t>(rng.below(component.size()))];
      if (load[c] >= options.cap) continue;
      ++load[c];
      holders.push_back(c);
    }
    return holders;
  };

  double best_gap = std::numeric_limits<double>::infinity();
  double best_value = 0.0;
  auto note = [&](long sum) {
    if (gap(sum) < best_gap) {
      best_gap = gap(sum);
      best_value = static_cast<double>(sum) / pairs;
    }
  };

  for (std::uint32_t attempt = 0; attempt < options.rejection_draws; ++attempt) {
    PairSum state(hops, draw());
    note(state.sum());
    if (gap(state.sum()) <= options.tolerance) return to_plan(state.holders());
  }

  for (std::uint32_t restart = 0; restart < options.restarts; ++restart) {
    PairSum state(hops, draw());
    note(state.sum());
    for (std::uint32_t step = 0; step < options.steps_per_restart; ++step) {
      if (gap(state.sum()) <= options.tolerance) return to_plan(state.holders());
      const std::size_t slot = 1 + static_cast<std::size_t>(rng.below(k - 1));
      const std::size_t c = component[static_cast<std::size_t>(rng.below(component.size()))];
      if (c == state.holders()[slot] || load[c] >= options.cap) continue;
      const long proposed = state.sum_if_replaced(slot, c);
      if (gap(proposed) <= gap(state.sum())) {
        --load[state.holders()[slot]];
        ++load[c];
        state.replace(slot, c);
        note(state.sum());
      }
    }
    if (gap(state.sum()) <= options.tolerance) return to_plan(state.holders());
  }
  throw TargetUnreachableError(target_hops, best_value);
}

// ---------------------------------------------------------------------------
// k-means

std::vector<NodeId> Clustering::members(const NetworkGraph& graph, std::size_t cluster) const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < membership.size(); ++i)
    if (membership[i] == cluster) out.push_back(graph.node_at(i).id);
  return out;
}

namespace {

double squared(Point a, Point b) { return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y); }

}  // namespace

Clustering kmeans_cluster(const NetworkGraph& graph, std::size_t k, Rng& rng, std::size_t max_iters) {
  const std::size_t n = graph.size();
  if (k == 0 || k > n) throw Error(ErrorCode::invalid_argument, "k-means needs 1 <= k <= n");
  std::vector<Point> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) points.push_back(graph.point(graph.node_at(i).id));

  Clustering result;
  result.k = k;
  std::vector<std::size_t> seeds(n);
  std::iota(seeds.begin(), seeds.end(), 0);
  for (std::size_t s : rng.sample(std::move(seeds), k)) result.centroids.push_back(points[s]);
  result.membership.assign(n, k);  // k marks "unassigned"

  for (std::size_t iter = 0; iter < std::max<std::size_t>(1, max_iters); ++iter) {
    bool changed = false;
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared(points[i], result.centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared(points[i], result.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      changed |= result.membership[i] != best;
      result.membership[i] = best;
      ++counts[best];
    }

    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      const auto largest = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (result.membership[i] != largest) continue;
        const double d = squared(points[i], result.centroids[largest]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      result.membership[far] = c;
      --counts[largest];
      ++counts[c];
      changed = true;
    }

    std::vector<Point> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
      sums[result.membership[i]].x += points[i].x;
      sums[result.membership[i]].y += points[i].y;
    }
    for (std::size_t c = 0; c < k; ++c)
      result.centroids[c] = {sums[c].x / static_cast<double>(counts[c]), sums[c].y / static_cast<double>(counts[c])};

    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) wcss += squared(points[i], result.centroids[result.membership[i]]);
    result.wcss_history.push_back(wcss);
    result.iterations = iter + 1;
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Clustering kmeans_best_of(const NetworkGraph& graph, std::size_t k, Rng& rng, std::size_t restarts,
                          std::size_t max_iters) {
  Clustering best = kmeans_cluster(graph, k, rng, max_iters);
  for (std::size_t r = 1; r < restarts; ++r) {
    Clustering next = kmeans_cluster(graph, k, rng, max_iters);
    if (next.wcss_history.back() < best.wcss_history.back()) best = std::move(next);
  }
  return best;
}

PlacementPlan place_clustered(const DataItem& data, const NetworkGraph& graph, const Clustering& clustering,
                              const ClusteredOptions& options, Rng& rng) {
  validate(data);
  if (clustering.k != data.f_k)
    throw Error(ErrorCode::invalid_argument, "clustered placement needs exactly f_k clusters");
  if (clustering.membership.size() != graph.size())
    throw Error(ErrorCode::invalid_argument, "clustering does not match the graph");

  const std::size_t home = clustering.cluster_of(graph, data.origin);
  std::vector<NodeId> chosen;
  bool violation = false;

  auto conflicts = [&](NodeId candidate) {
    for (NodeId c : chosen)
      if (c == candidate || graph.has_edge(c, candidate) || graph.has_edge(candidate, c)) return true;
    return false;
  };
  auto pick_from = [&](std::size_t cluster) {
    std::vector<NodeId> pool = clustering.members(graph, cluster);
    if (options.origin_holds_own_cluster) std::erase(pool, data.origin);
    if (pool.empty())
      throw Error(ErrorCode::placement_infeasible, "cluster " + std::to_string(cluster) + " has no eligible node");
    NodeId candidate = pool[static_cast<std::size_t>(rng.below(pool.size()))];
    for (std::uint32_t retry = 0; retry < options.retries && conflicts(candidate); ++retry)
      candidate = pool[static_cast<std::size_t>(rng.below(pool.size()))];
    if (conflicts(candidate)) violation = true;
    chosen.push_back(candidate);
  };

  if (options.origin_holds_own_cluster) chosen.push_back(data.origin);
  else pick_from(home);
  for (std::size_t c = 0; c < clustering.k; ++c)
    if (c != home) pick_from(c);

  PlacementPlan plan;
  plan.data_id = data.data_id;
  plan.origin = data.origin;
  plan.assignments = std::move(chosen);
  plan.dfk = compute_dfk(plan, graph);
  plan.neighbor_violation = violation;
  return plan;
}

double max_dfk_search(const NetworkGraph& graph, std::uint32_t f_k, Rng& rng, std::optional<NodeId> origin,
                      std::uint32_t restarts) {
  const std::size_t n = graph.size();
  if (f_k < 2 || f_k > n) throw Error(ErrorCode::invalid_argument, "max_dfk_search needs 2 <= f_k <= n");
  const HopMatrix hops(graph);
  const double pairs = static_cast<double>(f_k) * (f_k - 1) / 2.0;
  std::vector<std::size_t> universe;
  const std::size_t anchor = origin ? graph.index_of(*origin) : 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!origin || hops.at(anchor, i) >= 0) universe.push_back(i);

  long best = 0;
  for (std::uint32_t r = 0; r < restarts; ++r) {
    std::vector<std::size_t> start;
    if (origin) {
      start.push_back(anchor);
      std::vector<std::size_t> rest;
      for (std::size_t u : universe)
        if (u != anchor) rest.push_back(u);
      auto picked = rng.sample(std::move(rest), f_k - 1);
      start.insert(start.end(), picked.begin(), picked.end());
    } else {
      start = rng.sample(universe, f_k);
    }
    if (start.size() < f_k) throw Error(ErrorCode::placement_infeasible, "not enough connected nodes");
    PairSum state(hops, start);
    const std::size_t first_free = origin ? 1 : 0;
    for (;;) {
      long best_sum = state.sum();
      std::size_t best_slot = 0, best_node = 0;
      for (std::size_t slot = first_free; slot < f_k; ++slot) {
        for (std::size_t c : universe) {
          if (std::find(state.holders().begin(), state.holders().end(), c) != state.holders().end()) continue;
          bool reachable = true;
          for (std::size_t h : state.holders()) reachable &= hops.at(c, h) >= 0;
          if (!reachable) continue;
          const long s = state.sum_if_replaced(slot, c);
          if (s > best_sum) {
            best_sum = s;
            best_slot = slot;
            best_node = c;
          }
        }
      }
      if (best_sum == state.sum()) break;
      state.replace(best_slot, best_node);
    }
    best = std::max(best, state.sum());
  }
  return static_cast<double>(best) / pairs;
}

void write_plan_csv(std::ostream& out, const std::vector<PlacementPlan>& plans) {
  out << "data_id,fragment_index,node_id\n";
  for (const auto& p : plans)
    for (std::size_t i = 0; i < p.assignments.size(); ++i) out << p.data_id << ',' << i << ',' << p.assignments[i] << '\n';
}

void write_clustering_csv(std::ostream& out, const NetworkGraph& graph, const Clustering& clustering) {
  out << "node_id,cluster\n";
  for (std::size_t i = 0; i < clustering.membership.size(); ++i)
    out << graph.node_at(i).id << ',' << clustering.membership[i] << '\n';
}

}  // namespace uwsn
