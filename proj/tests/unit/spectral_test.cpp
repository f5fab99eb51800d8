#include "doctest.h"

#include <cmath>
#include <vector>

#include "rsid/generators.hpp"
#include "rsid/spectral.hpp"
#include "support/oracles.hpp"

using rsid::DirectedEdgeIndex;
using rsid::Graph;
using rsid::NonbacktrackingOp;
using rsid::PowerIterationOptions;
using rsid::ReducedOp;
using rsid::Side;
using rsid::SourceIndicator;

namespace {

Graph cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::from_edge_list(e);
}

Graph complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edge_list(e);
}

Graph path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edge_list(e);
}

PowerIterationOptions converged() {
  PowerIterationOptions o;
  o.run_to_convergence = true;
  return o;
}

} // namespace

TEST_CASE("k-regular graphs: dominant eigenvalue k-1, trees collapse to zero") {
  {
    const Graph k4 = complete(4);
    const DirectedEdgeIndex idx(k4);
    const auto pair = rsid::power_iteration(NonbacktrackingOp{&k4, &idx}, Side::right, converged());
    CHECK(pair.lambda == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(pair.converged);
    CHECK(oracle::dense_lambda_max(oracle::dense_nonbacktracking(k4, idx)) ==
          doctest::Approx(2.0).epsilon(1e-10));
  }
  {
    const Graph c6 = cycle(6);
    const DirectedEdgeIndex idx(c6);
    const auto pair = rsid::power_iteration(NonbacktrackingOp{&c6, &idx}, Side::right, converged());
    CHECK(pair.lambda == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(oracle::dense_lambda_max(oracle::dense_nonbacktracking(c6, idx)) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  {
    const Graph p4 = path(4);
    const DirectedEdgeIndex idx(p4);
    const auto pair = rsid::power_iteration(NonbacktrackingOp{&p4, &idx}, Side::right, converged());
    CHECK(pair.lambda == 0.0);
    CHECK(pair.collapse_step > 0);
    CHECK(oracle::is_nilpotent(oracle::dense_nonbacktracking(p4, idx)));
  }
}

TEST_CASE("geometric-mean damping handles bipartite period-2 oscillation") {
  // K_{2,3}: lambda_max(B) = sqrt((2-1)(3-1)) = sqrt(2); plain norm ratios
  // oscillate around it with period 2.
  const Graph k23 = Graph::from_edge_list(
      std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
  const DirectedEdgeIndex idx(k23);
  PowerIterationOptions opts;
  opts.iterations = 40;
  const auto pair = rsid::power_iteration(NonbacktrackingOp{&k23, &idx}, Side::right, opts);
  CHECK(pair.lambda == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(oracle::dense_lambda_max(oracle::dense_nonbacktracking(k23, idx)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("converged power iteration matches the dense eigensolver") {
  rsid::Rng rng(414);
  int checked = 0;
  double fixed_mode_gap = 0.0; // 20-iteration default: reported, not asserted
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_graph(rng);
    const DirectedEdgeIndex idx(g);
    const double dense = oracle::dense_lambda_max(oracle::dense_nonbacktracking(g, idx));
    const auto pair = rsid::power_iteration(NonbacktrackingOp{&g, &idx}, Side::right, converged());
    if (pair.collapse_step >= 0) {
      // nilpotent case: certify exactly; the QR value only confirms loosely
      CHECK(oracle::is_nilpotent(oracle::dense_nonbacktracking(g, idx)));
      CHECK(dense <= 0.05);
      ++checked;
      continue;
    }
    const auto quick = rsid::power_iteration(NonbacktrackingOp{&g, &idx}, Side::right);
    fixed_mode_gap = std::max(fixed_mode_gap, std::abs(quick.lambda - dense));
    if (!pair.converged) continue; // genuinely oscillatory case: flag honest, skip the tight bound
    CHECK(std::abs(pair.lambda - dense) <= 1e-6 * std::max(1.0, dense));
    ++checked;
  }
  CHECK(checked >= 20);
  MESSAGE("max |lambda - dense| with the default 20 iterations: ", fixed_mode_gap);
}

TEST_CASE("dominant pair: residuals small, eigenvectors nonnegative and uniform on C6/K4") {
  for (const Graph& g : {complete(4), cycle(6)}) {
    const DirectedEdgeIndex idx(g);
    const auto pair = rsid::dominant_pair_nonbacktracking(g, idx, converged());
    REQUIRE(pair.right.size() == static_cast<std::size_t>(idx.directed_count()));
    REQUIRE(pair.left.size() == pair.right.size());
    const double expect = 1.0 / std::sqrt(static_cast<double>(idx.directed_count()));
    for (int e = 0; e < idx.directed_count(); ++e) {
      CHECK(pair.right[e] == doctest::Approx(expect).epsilon(1e-9));
      CHECK(pair.left[e] == doctest::Approx(expect).epsilon(1e-9));
    }
    // residual check against the matrix-free operator
    const NonbacktrackingOp op{&g, &idx};
    const auto br = op(pair.right, Side::right);
    const auto bl = op(pair.left, Side::left);
    double res_r = 0.0, res_l = 0.0;
    for (int e = 0; e < idx.directed_count(); ++e) {
      res_r += (br[e] - pair.lambda * pair.right[e]) * (br[e] - pair.lambda * pair.right[e]);
      res_l += (bl[e] - pair.lambda * pair.left[e]) * (bl[e] - pair.lambda * pair.left[e]);
    }
    CHECK(std::sqrt(res_r) <= 1e-6 * pair.lambda);
    CHECK(std::sqrt(res_l) <= 1e-6 * pair.lambda);
  }
}

TEST_CASE("left pair equals the dense transpose right pair") {
  rsid::Rng rng(11);
  const Graph g = oracle::random_connected_graph(rng, 6, 9);
  const DirectedEdgeIndex idx(g);
  const auto pair = rsid::dominant_pair_nonbacktracking(g, idx, converged());
  if (pair.converged && pair.lambda > 0.1) {
    const auto dense = oracle::dense_dominant_pair(oracle::dense_nonbacktracking(g, idx));
    for (int e = 0; e < idx.directed_count(); ++e) {
      CHECK(pair.right[e] == doctest::Approx(dense.right[e]).epsilon(1e-6).scale(1.0));
      CHECK(pair.left[e] == doctest::Approx(dense.left[e]).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("zeroing candidates never raises the dominant eigenvalue") {
  rsid::Rng rng(2718);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_graph(rng);
    const DirectedEdgeIndex idx(g);
    const double lb = oracle::dense_lambda_max(oracle::dense_nonbacktracking(g, idx));
    for (int s = 0; s < g.node_count(); ++s) {
      const SourceIndicator ind(g.node_count(), std::vector<int>{s});
      const double lr = oracle::dense_lambda_max(oracle::dense_reduced(g, idx, ind));
      CHECK(lr <= lb + 1e-6);
      const auto est = rsid::power_iteration(ReducedOp{&g, &idx, &ind}, Side::right, converged());
      CHECK(est.lambda <= lb + 1e-6);
    }
  }
}

TEST_CASE("delta lambda: symmetry on C6 and agreement with the direct double sum") {
  {
    const Graph c6 = cycle(6);
    const DirectedEdgeIndex idx(c6);
    const auto pair = rsid::dominant_pair_nonbacktracking(c6, idx, converged());
    std::vector<double> values;
    for (int s = 0; s < 6; ++s) {
      const std::vector<int> cand = {s};
      const auto dl = rsid::delta_lambda(pair, c6, idx, cand);
      REQUIRE(!dl.degenerate);
      values.push_back(dl.value);
    }
    for (double v : values) CHECK(v == doctest::Approx(values[0]).epsilon(1e-9));
  }
  {
    // direct evaluation of the single-source double sum with the dense pair
    const Graph k4 = complete(4);
    const DirectedEdgeIndex idx(k4);
    const auto dense = oracle::dense_dominant_pair(oracle::dense_nonbacktracking(k4, idx));
    rsid::EigenPair pair;
    pair.lambda = dense.lambda;
    pair.right.assign(dense.right.data(), dense.right.data() + dense.right.size());
    pair.left.assign(dense.left.data(), dense.left.data() + dense.left.size());

    const int s = 2;
    double numerator = 0.0;
    double den_drop = 0.0;
    for (int i : k4.neighbors(s))
      for (int k : k4.neighbors(s)) {
        if (k == i) continue;
        numerator += dense.left[idx.index_of(k4, i, s)] * dense.right[idx.index_of(k4, s, k)];
      }
    double vu = 0.0;
    for (int e = 0; e < idx.directed_count(); ++e) vu += dense.left[e] * dense.right[e];
    for (int k : k4.neighbors(s))
      den_drop += dense.left[idx.index_of(k4, k, s)] * dense.right[idx.index_of(k4, k, s)];
    const double direct = numerator / (vu - den_drop);

    const std::vector<int> cand = {s};
    const auto dl = rsid::delta_lambda(pair, k4, idx, cand);
    REQUIRE(!dl.degenerate);
    CHECK(dl.value == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("delta lambda ranking tracks the exact eigenvalue drop") {
  rsid::Rng rng(909);
  const Graph g = rsid::generate_small_world(20, 4, 0.3, rng);
  const DirectedEdgeIndex idx(g);
  const auto pair = rsid::dominant_pair_nonbacktracking(g, idx, converged());
  const double lb = oracle::dense_lambda_max(oracle::dense_nonbacktracking(g, idx));
  std::vector<double> estimated, exact;
  for (int s = 0; s < g.node_count(); ++s) {
    const std::vector<int> cand = {s};
    const auto dl = rsid::delta_lambda(pair, g, idx, cand);
    REQUIRE(!dl.degenerate);
    estimated.push_back(dl.value);
    const SourceIndicator ind(g.node_count(), cand);
    exact.push_back(lb - oracle::dense_lambda_max(oracle::dense_reduced(g, idx, ind)));
  }
  CHECK(oracle::spearman(estimated, exact) >= 0.8);
}

TEST_CASE("delta lambda edge cases: degree-0 candidate and tree degeneration") {
  {
    // isolated node in the snapshot: dB = 0, so the estimate is exactly zero
    const Graph g = Graph::from_edge_list(
        std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}}, 4);
    const DirectedEdgeIndex idx(g);
    const auto pair = rsid::dominant_pair_nonbacktracking(g, idx, converged());
    const std::vector<int> cand = {3};
    const auto dl = rsid::delta_lambda(pair, g, idx, cand);
    REQUIRE(!dl.degenerate);
    CHECK(dl.value == 0.0);
  }
  {
    const Graph tree = path(5);
    const DirectedEdgeIndex idx(tree);
    const auto pair = rsid::dominant_pair_nonbacktracking(tree, idx, converged());
    const std::vector<int> cand = {2};
    CHECK(rsid::delta_lambda(pair, tree, idx, cand).degenerate);
  }
  {
    const Graph c6 = cycle(6);
    const DirectedEdgeIndex idx(c6);
    const auto pair = rsid::dominant_pair_nonbacktracking(c6, idx, converged());
    CHECK_THROWS_AS(rsid::delta_lambda(pair, c6, idx, std::vector<int>{}), std::invalid_argument);
  }
}

TEST_CASE("empty edge space: lambda is zero") {
  const Graph isolated = Graph::from_edge_list(std::vector<std::pair<int, int>>{}, 3);
  const DirectedEdgeIndex idx(isolated);
  const auto pair = rsid::power_iteration(NonbacktrackingOp{&isolated, &idx}, Side::right);
  CHECK(pair.lambda == 0.0);
  CHECK(pair.converged);
}
