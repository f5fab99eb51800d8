#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsid/graph.hpp"
#include "rsid/rng.hpp"

namespace rsid {

// Watts-Strogatz small world: a ring where every node links to its k/2
// nearest neighbors on each side, then the far endpoint of every ring edge
// is rewired with probability beta to a uniform target that creates neither
// a self-loop nor a duplicate edge. Edge count n*k/2 is preserved.
inline Graph generate_small_world(int n, int k, double beta, Rng& rng) {
  if (n < 3) throw std::invalid_argument("small_world: need n >= 3");
  if (k <= 0 || k % 2 != 0 || k >= n)
    throw std::invalid_argument("small_world: need even k with 0 < k < n");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("small_world: beta outside [0,1]");

  std::vector<std::set<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int d = 1; d <= k / 2; ++d) {
      const int j = (i + d) % n;
      adj[i].insert(j);
      adj[j].insert(i);
    }

  for (int d = 1; d <= k / 2; ++d)
    for (int i = 0; i < n; ++i) {
      if (!rng.bernoulli(beta)) continue;
      const int old = (i + d) % n;
      if (!adj[i].count(old)) continue; // already rewired away by an earlier pass
      int target = -1;
      for (int attempt = 0; attempt < 8 * n; ++attempt) {
        const int w = static_cast<int>(rng.uniform_index(n));
        if (w != i && !adj[i].count(w)) {
          target = w;
          break;
        }
      }
      if (target < 0) continue; // node saturated, keep the ring edge
      adj[i].erase(old);
      adj[old].erase(i);
      adj[i].insert(target);
      adj[target].insert(i);
    }

  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n) * k / 2);
  for (int i = 0; i < n; ++i)
    for (int j : adj[i])
      if (j > i) edges.emplace_back(i, j);
  return Graph::from_edge_list(edges, n);
}

// 2D grid, 4-neighbor connectivity, non-periodic boundary.
// M = rows*(cols-1) + cols*(rows-1).
inline Graph generate_lattice(int rows, int cols) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("lattice: need rows, cols >= 2");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(rows) * (cols - 1) + static_cast<std::size_t>(cols) * (rows - 1));
  const auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  return Graph::from_edge_list(edges, rows * cols);
}

} // namespace rsid
