// Test-side reference implementations. These deliberately avoid the library's
// own algorithms: all-pairs Floyd-Warshall instead of Dijkstra/BFS, exhaustive
// enumeration instead of search, direct hypergeometric sums.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "uwsn/topology.hpp"

namespace oracle {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// dist[i][j] over graph indices; `unit` counts hops instead of ETX.
inline std::vector<std::vector<double>> floyd(const uwsn::NetworkGraph& g, bool unit) {
  const std::size_t n = g.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0.0;
    for (const auto& e : g.node_at(i).edges) d[i][g.index_of(e.to)] = unit ? 1.0 : e.etx;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Mean pairwise hop distance of a holder list, from a Floyd hop matrix.
inline double mean_pairwise(const uwsn::NetworkGraph& g, const std::vector<std::vector<double>>& hops,
                            const std::vector<uwsn::NodeId>& holders) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < holders.size(); ++i)
    for (std::size_t j = i + 1; j < holders.size(); ++j, ++pairs)
      sum += hops[g.index_of(holders[i])][g.index_of(holders[j])];
  return pairs ? sum / static_cast<double>(pairs) : 0.0;
}

/// Exhaustive maximum of mean pairwise hops over all k-subsets.
inline double brute_max_dfk(const uwsn::NetworkGraph& g, std::size_t k) {
  const auto hops = floyd(g, true);
  const std::size_t n = g.size();
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
  double best = 0.0;
  do {
    std::vector<uwsn::NodeId> ids;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) ids.push_back(g.node_at(i).id);
    best = std::max(best, mean_pairwise(g, hops, ids));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

/// Cost of an explicit hop sequence; kInf when an edge is missing.
inline double path_cost(const uwsn::NetworkGraph& g, const std::vector<uwsn::NodeId>& hops) {
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < hops.size(); ++i) {
    auto e = g.etx(hops[i], hops[i + 1]);
    if (!e) return kInf;
    c += *e;
  }
  return c;
}

/// Random connected graph: random spanning tree plus extra edges. ETX values
/// come from a small set so equal-cost alternatives are common.
inline uwsn::NetworkGraph random_connected_graph(std::mt19937_64& gen, std::size_t n, double extra_prob) {
  std::uniform_real_distribution<double> coord(0.0, 1000.0), coin(0.0, 1.0);
  const double levels[] = {1.0, 1.5, 2.0, 2.5};
  std::uniform_int_distribution<int> level(0, 3);
  std::vector<uwsn::Point> pos(n);
  for (auto& p : pos) p = {coord(gen), coord(gen)};
  std::vector<uwsn::WeightedEdge> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b || used[a][b]) return;
    used[a][b] = used[b][a] = true;
    edges.push_back({static_cast<uwsn::NodeId>(a), static_cast<uwsn::NodeId>(b), levels[level(gen)],
                     levels[level(gen)]});
  };
  for (std::size_t i = 1; i < n; ++i) add(i, std::uniform_int_distribution<std::size_t>(0, i - 1)(gen));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(gen) < extra_prob) add(i, j);
  return uwsn::make_graph(pos, edges);
}

inline double log_choose(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

/// P(X = x) for X ~ Hypergeometric(total, successes, draws).
inline double hypergeom(int total, int successes, int draws, int x) {
  if (x < 0 || x > draws || x > successes || draws - x > total - successes) return 0.0;
  return std::exp(log_choose(successes, x) + log_choose(total - successes, draws - x) - log_choose(total, draws));
}

}  // namespace oracle
