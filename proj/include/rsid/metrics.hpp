#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsid/errors.hpp"
#include "rsid/graph.hpp"
#include "rsid/si_sim.hpp"
#include "rsid/source_id.hpp"

namespace rsid {

enum class DistanceScope { snapshot, network };

struct MatchResult {
  double delta = 0.0;        // mean matched hop distance
  std::vector<int> pairing;  // pairing[i]: index into the identified set matched to true source i
  std::vector<double> pair_distance;
};

namespace detail {

inline MatchResult match_on_costs(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  MatchResult best;
  double best_total = -1.0;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do { // lexicographic permutation order; the first optimum is kept
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i][p[i]];
    if (best_total < 0.0 || total < best_total - 1e-12) {
      best_total = total;
      best.pairing = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  best.delta = best_total / static_cast<double>(n);
  best.pair_distance.resize(n);
  for (std::size_t i = 0; i < n; ++i) best.pair_distance[i] = cost[i][best.pairing[i]];
  return best;
}

} // namespace detail

// Minimum-cost association between true and identified sources under hop
// distances in g; unreachable pairs cost diameter(g) + 1. Exhaustive over
// permutations (source sets are small).
inline MatchResult match_sources(std::span<const int> true_sources,
                                 std::span<const int> identified, const Graph& g) {
  if (true_sources.size() != identified.size())
    throw std::invalid_argument("match_sources: set sizes differ");
  if (true_sources.empty()) throw std::invalid_argument("match_sources: empty sets");
  if (true_sources.size() > 8)
    throw std::invalid_argument("match_sources: permutation search limited to 8 sources");

  const double penalty = static_cast<double>(diameter(g)) + 1.0;
  std::vector<std::vector<double>> cost(true_sources.size(),
                                        std::vector<double>(identified.size(), 0.0));
  for (std::size_t i = 0; i < true_sources.size(); ++i) {
    const auto dist = bfs_distances(g, true_sources[i]);
    for (std::size_t j = 0; j < identified.size(); ++j) {
      const int d = dist[identified[j]];
      cost[i][j] = (d == kUnreachable) ? penalty : static_cast<double>(d);
    }
  }
  return detail::match_on_costs(cost);
}

struct InstanceEvaluation {
  bool exact = false;
  bool one_hop = false;
  double error_distance = 0.0;
};

// Scores one identification against the snapshot's ground truth. Distances
// are measured inside the observed snapshot by default; DistanceScope::network
// measures them in the base network instead (requires base + origin ids).
inline InstanceEvaluation evaluate_instance(const IdentificationResult& result,
                                            const Snapshot& snapshot,
                                            DistanceScope scope = DistanceScope::snapshot,
                                            const Graph* base_network = nullptr) {
  if (!snapshot.true_sources)
    throw DataError("evaluate_instance: snapshot carries no ground-truth sources");
  const auto& truth = *snapshot.true_sources;

  MatchResult match;
  if (scope == DistanceScope::snapshot) {
    match = match_sources(truth, result.chosen, snapshot.graph);
  } else {
    if (base_network == nullptr || snapshot.origin_ids.empty())
      throw DataError("evaluate_instance: network-scope distances need the base network");
    std::vector<int> t2, c2;
    for (int v : truth) t2.push_back(snapshot.origin_ids[v]);
    for (int v : result.chosen) c2.push_back(snapshot.origin_ids[v]);
    match = match_sources(t2, c2, *base_network);
  }

  InstanceEvaluation ev;
  std::vector<int> a(truth.begin(), truth.end());
  std::vector<int> b(result.chosen.begin(), result.chosen.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  ev.exact = (a == b);
  ev.one_hop = std::all_of(match.pair_distance.begin(), match.pair_distance.end(),
                           [](double d) { return d <= 1.0; });
  ev.error_distance = match.delta;
  return ev;
}

} // namespace rsid
