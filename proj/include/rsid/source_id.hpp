#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsid/errors.hpp"
#include "rsid/graph.hpp"
#include "rsid/nonbacktracking.hpp"
#include "rsid/parallel.hpp"
#include "rsid/spectral.hpp"

namespace rsid {

enum class Method { msi, pmsi, jordan_center, rumor_center_bfs };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::msi: return "msi";
    case Method::pmsi: return "pmsi";
    case Method::jordan_center: return "jc";
    case Method::rumor_center_bfs: return "rc-bfs";
  }
  return "?";
}

struct CandidateScore {
  std::vector<int> nodes;
  double score = 0.0;
  bool degenerate = false;
};

struct IdentificationResult {
  std::vector<CandidateScore> ranked; // best first
  std::vector<int> chosen;            // == ranked.front().nodes
  Method method = Method::msi;
};

inline std::uint64_t binomial_count(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (c > UINT64_MAX / num) return UINT64_MAX; // saturate
    c = c * num / static_cast<std::uint64_t>(i);
  }
  return c;
}

/// Streams all size-s subsets of {0..n-1} in lexicographic order.
class CandidateEnumerator {
public:
  CandidateEnumerator(int n, int s) : n_(n), s_(s) {
    if (s < 1 || s > n) throw std::invalid_argument("candidate enumeration: need 1 <= s <= n");
    current_.resize(s);
    std::iota(current_.begin(), current_.end(), 0);
  }

  bool done() const { return done_; }
  const std::vector<int>& current() const { return current_; }

  void advance() {
    int i = s_ - 1;
    while (i >= 0 && current_[i] == n_ - s_ + i) --i;
    if (i < 0) {
      done_ = true;
      return;
    }
    ++current_[i];
    for (int j = i + 1; j < s_; ++j) current_[j] = current_[j - 1] + 1;
  }

private:
  int n_, s_;
  std::vector<int> current_;
  bool done_ = false;
};

namespace detail {

inline double tie_eps(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

// Eccentricity of a candidate set: the largest hop distance from the set to
// any node of the graph (kUnreachable if some node cannot be reached).
inline long long set_eccentricity(const Graph& g, std::span<const int> set) {
  std::vector<int> dist(g.node_count(), kUnreachable);
  std::queue<int> q;
  for (int s : set) {
    dist[s] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : g.neighbors(v))
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  long long ecc = 0;
  for (int d : dist) ecc = std::max<long long>(ecc, d);
  return ecc;
}

// Flattened lexicographic candidate list; guards against absurd requests.
inline std::vector<int> flatten_candidates(int n, int s, std::uint64_t& total_out) {
  const std::uint64_t total = binomial_count(n, s);
  if (total > 10'000'000ULL)
    throw DataError("candidate space too large for exhaustive enumeration: " +
                    std::to_string(total) + " sets");
  std::vector<int> flat;
  flat.reserve(static_cast<std::size_t>(total) * s);
  for (CandidateEnumerator en(n, s); !en.done(); en.advance())
    flat.insert(flat.end(), en.current().begin(), en.current().end());
  total_out = total;
  return flat;
}

} // namespace detail

// Exhaustive search for the source set whose zeroed-out reduced matrix has
// the smallest dominant eigenvalue. Ties within a small relative tolerance
// go to the lexicographically smallest set. When every candidate collapses
// (tree-like snapshots make every reduced matrix nilpotent), candidates are
// ordered by how early the iterate dies and the growth seen just before; a
// full tie on that falls back to Jordan-center ordering.
inline IdentificationResult msi(const Graph& g, int source_count,
                                const PowerIterationOptions& opts = {}, int threads = 1) {
  if (g.node_count() == 0) throw std::invalid_argument("msi: empty snapshot");
  const DirectedEdgeIndex idx(g);
  std::uint64_t total = 0;
  const std::vector<int> flat = detail::flatten_candidates(g.node_count(), source_count, total);
  const auto candidate = [&flat, source_count](std::size_t i) {
    return std::span<const int>(flat.data() + i * source_count, source_count);
  };

  struct Detail {
    double lambda = 0.0;
    int collapse_step = -1;
    double last_ratio = 0.0;
  };
  std::vector<Detail> det(total);
  parallel_for(total, threads, [&](std::size_t i) {
    const auto cand = candidate(i);
    const SourceIndicator ind(g.node_count(), cand);
    const ReducedOp op{&g, &idx, &ind};
    const EigenPair pair = power_iteration(op, Side::right, opts);
    det[i] = {pair.lambda, pair.collapse_step, pair.last_ratio};
  });

  bool all_collapsed = true;
  for (const auto& d : det)
    if (d.collapse_step < 0) {
      all_collapsed = false;
      break;
    }

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t winner = 0;

  if (!all_collapsed) {
    std::sort(order.begin(), order.end(), [&det](std::size_t a, std::size_t b) {
      if (det[a].lambda != det[b].lambda) return det[a].lambda < det[b].lambda;
      return a < b;
    });
    const double best = det[order.front()].lambda;
    for (std::size_t i = 0; i < total; ++i)
      if (det[i].lambda <= best + detail::tie_eps(best)) {
        winner = i;
        break;
      }
  } else {
    std::sort(order.begin(), order.end(), [&det](std::size_t a, std::size_t b) {
      if (det[a].collapse_step != det[b].collapse_step)
        return det[a].collapse_step < det[b].collapse_step;
      if (det[a].last_ratio != det[b].last_ratio) return det[a].last_ratio < det[b].last_ratio;
      return a < b;
    });
    const Detail& best = det[order.front()];
    bool full_tie = true;
    for (const auto& d : det)
      if (d.collapse_step != best.collapse_step ||
          std::abs(d.last_ratio - best.last_ratio) > detail::tie_eps(best.last_ratio)) {
        full_tie = false;
        break;
      }
    if (full_tie) {
      std::vector<long long> ecc(total);
      parallel_for(total, threads,
                   [&](std::size_t i) { ecc[i] = detail::set_eccentricity(g, candidate(i)); });
      std::sort(order.begin(), order.end(), [&ecc](std::size_t a, std::size_t b) {
        if (ecc[a] != ecc[b]) return ecc[a] < ecc[b];
        return a < b;
      });
      winner = order.front();
    } else {
      for (std::size_t i = 0; i < total; ++i)
        if (det[i].collapse_step == best.collapse_step &&
            std::abs(det[i].last_ratio - best.last_ratio) <= detail::tie_eps(best.last_ratio)) {
          winner = i;
          break;
        }
    }
  }

  const auto pos = std::find(order.begin(), order.end(), winner);
  std::rotate(order.begin(), pos, pos + 1);

  IdentificationResult res;
  res.method = Method::msi;
  res.ranked.reserve(total);
  for (std::size_t i : order) {
    const auto cand = candidate(i);
    res.ranked.push_back({{cand.begin(), cand.end()}, det[i].lambda, false});
  }
  res.chosen = res.ranked.front().nodes;
  return res;
}

// Perturbation-based variant: one dominant eigenpair of B, then a first-order
// delta-lambda score per candidate; the maximizer is declared. Degenerate
// candidates (vanishing denominator) rank last.
inline IdentificationResult pmsi(const Graph& g, int source_count,
                                 const PowerIterationOptions& opts = {}, int threads = 1) {
  if (g.node_count() == 0) throw std::invalid_argument("pmsi: empty snapshot");
  const DirectedEdgeIndex idx(g);
  std::uint64_t total = 0;
  const std::vector<int> flat = detail::flatten_candidates(g.node_count(), source_count, total);
  const auto candidate = [&flat, source_count](std::size_t i) {
    return std::span<const int>(flat.data() + i * source_count, source_count);
  };

  const EigenPair pair = dominant_pair_nonbacktracking(g, idx, opts);
  double vu = 0.0;
  for (int e = 0; e < idx.directed_count(); ++e) vu += pair.left[e] * pair.right[e];

  std::vector<DeltaLambda> scores(total);
  parallel_for(total, threads,
               [&](std::size_t i) { scores[i] = delta_lambda(pair, g, idx, candidate(i), vu); });

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
    if (scores[a].degenerate != scores[b].degenerate) return !scores[a].degenerate;
    if (!scores[a].degenerate && scores[a].value != scores[b].value)
      return scores[a].value > scores[b].value;
    return a < b;
  });

  std::size_t winner = order.front();
  if (!scores[winner].degenerate) {
    const double best = scores[winner].value;
    for (std::size_t i = 0; i < total; ++i)
      if (!scores[i].degenerate && scores[i].value >= best - detail::tie_eps(best)) {
        winner = i;
        break;
      }
  } else {
    winner = 0; // everything degenerate: lexicographic order is all we have
  }
  const auto pos = std::find(order.begin(), order.end(), winner);
  std::rotate(order.begin(), pos, pos + 1);

  IdentificationResult res;
  res.method = Method::pmsi;
  res.ranked.reserve(total);
  for (std::size_t i : order) {
    const auto cand = candidate(i);
    res.ranked.push_back({{cand.begin(), cand.end()}, scores[i].value, scores[i].degenerate});
  }
  res.chosen = res.ranked.front().nodes;
  return res;
}

namespace detail {

// Nodes of the largest connected component, ascending; ties between equal
// components go to the one containing the smallest id.
inline std::vector<int> largest_component_nodes(const Graph& g) {
  const auto label = component_labels(g);
  int labels = 0;
  for (int l : label) labels = std::max(labels, l + 1);
  std::vector<int> size(labels, 0);
  for (int l : label) ++size[l];
  int best = 0;
  for (int l = 1; l < labels; ++l)
    if (size[l] > size[best]) best = l;
  std::vector<int> nodes;
  for (int v = 0; v < g.node_count(); ++v)
    if (label[v] == best) nodes.push_back(v);
  return nodes;
}

} // namespace detail

// Node minimizing eccentricity within the infected subgraph (largest
// component when disconnected). Ties go to the smallest node id.
inline IdentificationResult jordan_center(const Graph& g) {
  if (g.node_count() == 0) throw DataError("jordan_center: empty snapshot");
  const auto nodes = detail::largest_component_nodes(g);
  IdentificationResult res;
  res.method = Method::jordan_center;
  res.ranked.reserve(nodes.size());
  for (int v : nodes) {
    const auto dist = bfs_distances(g, v);
    int ecc = 0;
    for (int w : nodes) ecc = std::max(ecc, dist[w]);
    res.ranked.push_back({{v}, static_cast<double>(ecc), false});
  }
  std::stable_sort(res.ranked.begin(), res.ranked.end(),
                   [](const CandidateScore& a, const CandidateScore& b) {
                     if (a.score != b.score) return a.score < b.score;
                     return a.nodes < b.nodes;
                   });
  res.chosen = res.ranked.front().nodes;
  return res;
}

namespace detail {

// log R(r, T) for the BFS tree rooted at r: log N! - sum_u log(subtree(u)).
inline double log_rumor_centrality(const Graph& g, std::span<const int> comp, int root) {
  std::vector<int> parent(g.node_count(), -2);
  std::vector<int> bfs_order;
  bfs_order.reserve(comp.size());
  std::queue<int> q;
  parent[root] = -1;
  q.push(root);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    bfs_order.push_back(v);
    for (int w : g.neighbors(v)) // ascending ids: first discovery fixes the parent
      if (parent[w] == -2) {
        parent[w] = v;
        q.push(w);
      }
  }
  std::vector<int> subtree(g.node_count(), 0);
  double log_sizes = 0.0;
  for (auto it = bfs_order.rbegin(); it != bfs_order.rend(); ++it) {
    const int v = *it;
    subtree[v] += 1;
    log_sizes += std::log(static_cast<double>(subtree[v]));
    if (parent[v] >= 0) subtree[parent[v]] += subtree[v];
  }
  return std::lgamma(static_cast<double>(bfs_order.size()) + 1.0) - log_sizes;
}

} // namespace detail

// Rumor centrality on per-candidate BFS trees, compared in the log domain.
// The maximizer is declared; ties go to the smallest node id.
inline IdentificationResult rumor_center_bfs(const Graph& g) {
  if (g.node_count() == 0) throw DataError("rumor_center_bfs: empty snapshot");
  const auto nodes = detail::largest_component_nodes(g);
  IdentificationResult res;
  res.method = Method::rumor_center_bfs;
  res.ranked.reserve(nodes.size());
  for (int v : nodes)
    res.ranked.push_back({{v}, detail::log_rumor_centrality(g, nodes, v), false});
  std::stable_sort(res.ranked.begin(), res.ranked.end(),
                   [](const CandidateScore& a, const CandidateScore& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.nodes < b.nodes;
                   });
  // Snap near-equal log-centralities (symmetric roots differ only by
  // round-off) so the smallest id wins the tie.
  const double best = res.ranked.front().score;
  std::size_t winner = 0;
  for (std::size_t i = 1; i < res.ranked.size(); ++i)
    if (res.ranked[i].score >= best - detail::tie_eps(best) &&
        res.ranked[i].nodes < res.ranked[winner].nodes)
      winner = i;
  std::rotate(res.ranked.begin(), res.ranked.begin() + winner,
              res.ranked.begin() + winner + 1);
  res.chosen = res.ranked.front().nodes;
  return res;
}

} // namespace rsid
