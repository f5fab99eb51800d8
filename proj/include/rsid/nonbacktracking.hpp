#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "rsid/graph.hpp"

namespace rsid {

enum class Side { left, right };

namespace detail {

// Shared kernel for B and R. Both sides reduce to a per-node total over the
// node's incident directed edges minus the single excluded reciprocal term,
// which keeps one application at O(M). `factor(node)` is 1 everywhere for B
// and n_i for R (zeroing the block whose tail / head node is a source).
template <class Factor>
std::vector<double> apply_edge_operator(const Graph& g, const DirectedEdgeIndex& idx,
                                        std::span<const double> x, Side side,
                                        Factor&& factor) {
  if (static_cast<int>(x.size()) != idx.directed_count())
    throw std::invalid_argument("edge-space vector has wrong dimension");
  std::vector<double> out(x.size(), 0.0);
  const int n = g.node_count();
  if (side == Side::left) {
    // (xB)_{i->j} = sum_{k in d(i) \ j} x_{k->i}
    for (int i = 0; i < n; ++i) {
      const double f = factor(i);
      const int deg = static_cast<int>(g.neighbors(i).size());
      double total = 0.0;
      for (int pos = 0; pos < deg; ++pos) total += x[idx.in_edge(i, pos)];
      for (int pos = 0; pos < deg; ++pos)
        out[idx.out_edge(i, pos)] = f * (total - x[idx.in_edge(i, pos)]);
    }
  } else {
    // (Bx)_{k->l} = sum_{j in d(l) \ k} x_{l->j}
    for (int l = 0; l < n; ++l) {
      const double f = factor(l);
      const int deg = static_cast<int>(g.neighbors(l).size());
      double total = 0.0;
      for (int pos = 0; pos < deg; ++pos) total += x[idx.out_edge(l, pos)];
      for (int pos = 0; pos < deg; ++pos)
        out[idx.in_edge(l, pos)] = f * (total - x[idx.out_edge(l, pos)]);
    }
  }
  return out;
}

} // namespace detail

// Matrix-free application of the nonbacktracking matrix B.
//   left:  (xB)_{i->j} = sum_{k in d(i) \ j} x_{k->i}
//   right: (Bx)_{k->l} = sum_{j in d(l) \ k} x_{l->j}
inline std::vector<double> apply_nonbacktracking(const Graph& g, const DirectedEdgeIndex& idx,
                                                 std::span<const double> x, Side side) {
  return detail::apply_edge_operator(g, idx, x, side, [](int) { return 1.0; });
}

// Matrix-free application of the reduced matrix R = B with every entry whose
// tail node is a declared source set to zero.
inline std::vector<double> apply_reduced(const Graph& g, const DirectedEdgeIndex& idx,
                                         const SourceIndicator& n, std::span<const double> x,
                                         Side side) {
  return detail::apply_edge_operator(g, idx, x, side, [&n](int i) { return n.factor(i); });
}

// Callable operator wrappers, handy for the spectral routines.
struct NonbacktrackingOp {
  const Graph* g;
  const DirectedEdgeIndex* idx;

  std::vector<double> operator()(std::span<const double> x, Side side) const {
    return apply_nonbacktracking(*g, *idx, x, side);
  }
  int dimension() const { return idx->directed_count(); }
};

struct ReducedOp {
  const Graph* g;
  const DirectedEdgeIndex* idx;
  const SourceIndicator* indicator;

  std::vector<double> operator()(std::span<const double> x, Side side) const {
    return apply_reduced(*g, *idx, *indicator, x, side);
  }
  int dimension() const { return idx->directed_count(); }
};

} // namespace rsid
