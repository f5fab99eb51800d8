#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rsid {

// Hop distance marker for nodes a BFS cannot reach.
inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Undirected simple graph over node ids 0..N-1. Adjacency lists are kept
/// sorted; the structure is immutable after construction and safe for
/// concurrent reads.
class Graph {
public:
  Graph() = default;

  // Builds a graph from unordered node-id pairs. Duplicate edges and
  // self-loops are dropped; ids between 0 and the maximum id that never
  // appear in an edge are retained as degree-0 nodes. min_node_count forces
  // trailing degree-0 nodes when larger than max id + 1.
  static Graph from_edge_list(std::span<const std::pair<int, int>> pairs,
                              int min_node_count = 0) {
    int max_id = min_node_count - 1;
    for (const auto& [a, b] : pairs) {
      if (a < 0 || b < 0) throw std::invalid_argument("edge list: negative node id");
      max_id = std::max(max_id, std::max(a, b));
    }
    Graph g;
    if (max_id >= 0) g.adj_.resize(static_cast<std::size_t>(max_id) + 1);
    for (const auto& [a, b] : pairs) {
      if (a == b) continue;
      g.adj_[a].push_back(b);
      g.adj_[b].push_back(a);
    }
    g.finalize();
    return g;
  }

  int node_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return edge_count_; }

  int degree(int i) const {
    check_node(i);
    return static_cast<int>(adj_[i].size());
  }

  const std::vector<int>& neighbors(int i) const {
    check_node(i);
    return adj_[i];
  }

  bool has_edge(int i, int j) const {
    check_node(i);
    check_node(j);
    return std::binary_search(adj_[i].begin(), adj_[i].end(), j);
  }

  // Edges as (i, j) pairs with i < j, lexicographic order.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int i = 0; i < node_count(); ++i)
      for (int j : adj_[i])
        if (j > i) out.emplace_back(i, j);
    return out;
  }

private:
  void finalize() {
    edge_count_ = 0;
    for (auto& list : adj_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      edge_count_ += static_cast<int>(list.size());
    }
    edge_count_ /= 2;
  }

  void check_node(int i) const {
    if (i < 0 || i >= node_count())
      throw std::invalid_argument("node id " + std::to_string(i) + " out of range");
  }

  std::vector<std::vector<int>> adj_;
  int edge_count_ = 0;
};

struct SubgraphResult {
  Graph graph;
  std::vector<int> to_original; // to_original[new_id] = old_id, ascending
};

// Induced subgraph on the given nodes, relabeled 0..|nodes|-1 in ascending
// original-id order.
inline SubgraphResult induced_subgraph(const Graph& g, std::span<const int> nodes) {
  std::vector<int> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int v : keep)
    if (v < 0 || v >= g.node_count())
      throw std::invalid_argument("induced_subgraph: unknown node id " + std::to_string(v));

  std::vector<int> new_id(g.node_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) new_id[keep[i]] = static_cast<int>(i);

  std::vector<std::pair<int, int>> edges;
  for (int v : keep)
    for (int w : g.neighbors(v))
      if (w > v && new_id[w] >= 0) edges.emplace_back(new_id[v], new_id[w]);

  SubgraphResult res;
  res.graph = Graph::from_edge_list(edges, static_cast<int>(keep.size()));
  res.to_original = std::move(keep);
  return res;
}

// Hop distances from root; kUnreachable where no path exists.
inline std::vector<int> bfs_distances(const Graph& g, int root) {
  if (root < 0 || root >= g.node_count())
    throw std::invalid_argument("bfs_distances: invalid root " + std::to_string(root));
  std::vector<int> dist(g.node_count(), kUnreachable);
  std::queue<int> q;
  dist[root] = 0;
  q.push(root);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

// Component label per node; labels assigned in order of smallest contained id.
inline std::vector<int> component_labels(const Graph& g) {
  std::vector<int> label(g.node_count(), -1);
  int next = 0;
  for (int s = 0; s < g.node_count(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : g.neighbors(v))
        if (label[w] < 0) {
          label[w] = next;
          q.push(w);
        }
    }
    ++next;
  }
  return label;
}

// Largest finite hop distance between any pair of nodes (0 for N <= 1).
inline int diameter(const Graph& g) {
  int best = 0;
  for (int v = 0; v < g.node_count(); ++v) {
    const auto dist = bfs_distances(g, v);
    for (int d : dist)
      if (d != kUnreachable) best = std::max(best, d);
  }
  return best;
}

/// Bijection between ordered adjacent pairs (i -> j) and indices 0..2M-1.
/// Undirected edges are numbered in (min, max) lexicographic order; edge m
/// holds directed indices 2m (low -> high) and 2m+1 (high -> low), so the
/// reciprocal of e is e ^ 1.
class DirectedEdgeIndex {
public:
  DirectedEdgeIndex() = default;

  explicit DirectedEdgeIndex(const Graph& g) {
    offsets_.resize(g.node_count() + 1, 0);
    for (int i = 0; i < g.node_count(); ++i)
      offsets_[i + 1] = offsets_[i] + static_cast<int>(g.neighbors(i).size());
    edge_at_.resize(offsets_.back(), -1);
    endpoints_.resize(2 * static_cast<std::size_t>(g.edge_count()));
    int m = 0;
    for (int i = 0; i < g.node_count(); ++i) {
      const auto& nbrs = g.neighbors(i);
      for (std::size_t pos = 0; pos < nbrs.size(); ++pos) {
        const int j = nbrs[pos];
        if (j <= i) continue;
        const int fwd = 2 * m;
        edge_at_[offsets_[i] + static_cast<int>(pos)] = fwd;
        const auto& back = g.neighbors(j);
        const auto it = std::lower_bound(back.begin(), back.end(), i);
        edge_at_[offsets_[j] + static_cast<int>(it - back.begin())] = fwd + 1;
        endpoints_[fwd] = {i, j};
        endpoints_[fwd + 1] = {j, i};
        ++m;
      }
    }
  }

  int directed_count() const { return static_cast<int>(endpoints_.size()); }

  // Index of the directed edge (adjacency[i][pos] is the head).
  int out_edge(int i, int pos) const { return edge_at_[offsets_[i] + pos]; }

  // Index of the reversed edge adjacency[i][pos] -> i.
  int in_edge(int i, int pos) const { return edge_at_[offsets_[i] + pos] ^ 1; }

  static int reciprocal(int e) { return e ^ 1; }

  std::pair<int, int> endpoints(int e) const { return endpoints_[e]; }

  // Index of (from -> to); throws if the nodes are not adjacent.
  int index_of(const Graph& g, int from, int to) const {
    const auto& nbrs = g.neighbors(from);
    const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), to);
    if (it == nbrs.end() || *it != to)
      throw std::invalid_argument("index_of: nodes are not adjacent");
    return out_edge(from, static_cast<int>(it - nbrs.begin()));
  }

private:
  std::vector<int> offsets_;
  std::vector<int> edge_at_;
  std::vector<std::pair<int, int>> endpoints_;
};

/// Candidate-source membership: n_i = 0 for declared sources, 1 otherwise.
/// An empty source set leaves every n_i = 1.
class SourceIndicator {
public:
  SourceIndicator(int node_count, std::span<const int> sources)
      : node_count_(node_count), is_source_(node_count, 0) {
    sources_.assign(sources.begin(), sources.end());
    std::sort(sources_.begin(), sources_.end());
    sources_.erase(std::unique(sources_.begin(), sources_.end()), sources_.end());
    for (int s : sources_) {
      if (s < 0 || s >= node_count)
        throw std::invalid_argument("source id " + std::to_string(s) + " out of range");
      is_source_[s] = 1;
    }
  }

  int node_count() const { return node_count_; }
  bool is_source(int i) const { return is_source_[i] != 0; }
  double factor(int i) const { return is_source_[i] ? 0.0 : 1.0; }
  const std::vector<int>& sources() const { return sources_; }

private:
  int node_count_ = 0;
  std::vector<std::uint8_t> is_source_;
  std::vector<int> sources_;
};

} // namespace rsid
