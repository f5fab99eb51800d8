#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsid/graph.hpp"
#include "rsid/nonbacktracking.hpp"

namespace rsid {

struct PowerIterationOptions {
  int iterations = 20;          // fixed-iteration mode
  bool run_to_convergence = false;
  double residual_tol = 1e-6;
  int max_iterations = 500;     // cap when running to convergence
};

/// Dominant-eigenvalue estimate of an edge-space operator. `right`/`left`
/// hold the unit eigenvector for whichever sides were computed. When the
/// iterate vanishes (nilpotent operator), `collapse_step` records the
/// iteration at which it died and `last_ratio` the growth ratio observed at
/// the last surviving iteration.
struct EigenPair {
  double lambda = 0.0;
  std::vector<double> right;
  std::vector<double> left;
  int iterations = 0;
  bool converged = false;
  int collapse_step = -1;
  double last_ratio = 0.0;
};

namespace detail {

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Growth-ratio estimate from the trailing window. Non-primitive operators
// settle into periodic ratios (a cycle in the recurrent class); the geometric
// mean over one detected period is then exact, since the ratio product over a
// period equals lambda^period. Falls back to the mean of the last two ratios
// when no short period fits.
inline double ratio_window_estimate(const std::vector<double>& ratios) {
  const std::size_t n = ratios.size();
  if (n == 1) return ratios[0];
  const auto at = [&](std::size_t back) { return ratios[n - 1 - back]; };
  for (std::size_t p = 1; p <= 12; ++p) {
    if (n < 2 * p) break;
    bool periodic = true;
    for (std::size_t i = 0; i < p && periodic; ++i)
      periodic = std::abs(at(i) - at(i + p)) <= 1e-9 * std::max(1.0, at(i));
    if (periodic) {
      double log_sum = 0.0;
      for (std::size_t i = 0; i < p; ++i) log_sum += std::log(at(i));
      return std::exp(log_sum / static_cast<double>(p));
    }
  }
  return std::sqrt(at(0) * at(1));
}

} // namespace detail

// Power iteration from the all-ones vector with per-step renormalization.
// The eigenvalue estimate is the geometric mean of the last two norm ratios,
// which damps the period-2 oscillation of bipartite-like edge dynamics
// without changing the limit for primitive operators.
template <class Op>
EigenPair power_iteration(const Op& op, Side side, const PowerIterationOptions& opts = {}) {
  if (opts.iterations < 1) throw std::invalid_argument("power_iteration: iterations must be >= 1");
  EigenPair out;
  const int dim = op.dimension();
  auto& vec = (side == Side::right) ? out.right : out.left;
  if (dim == 0) {
    out.converged = true;
    out.collapse_step = 0;
    return out;
  }

  std::vector<double> x(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  const int budget = opts.run_to_convergence ? opts.max_iterations : opts.iterations;
  std::vector<double> ratios;
  ratios.reserve(std::min(budget, 32));
  double residual = 0.0;
  bool settled = false; // residual met the tolerance at the final step
  for (int t = 1; t <= budget; ++t) {
    std::vector<double> y = op(x, side);
    const double r = detail::norm2(y);
    out.iterations = t;
    if (r <= 1e-300) {
      out.lambda = 0.0;
      out.collapse_step = t;
      out.last_ratio = ratios.empty() ? 0.0 : ratios.back();
      out.converged = true;
      vec.assign(dim, 0.0);
      return out;
    }
    double res = 0.0;
    for (int e = 0; e < dim; ++e) {
      const double d = y[e] - r * x[e];
      res += d * d;
    }
    residual = std::sqrt(res);
    for (int e = 0; e < dim; ++e) x[e] = y[e] / r;
    if (ratios.size() >= 32) ratios.erase(ratios.begin());
    ratios.push_back(r);
    settled = residual <= opts.residual_tol * r;
    if (opts.run_to_convergence && settled) break;
  }
  // Once the residual is below tolerance the iterate is an eigenvector and
  // the final ratio is its eigenvalue; the window estimate is only for
  // oscillating (non-primitive) operators that never settle, where stale
  // pre-limit ratios must not leak into the answer.
  out.lambda = settled ? ratios.back() : detail::ratio_window_estimate(ratios);
  out.last_ratio = ratios.back();
  out.converged = residual <= opts.residual_tol * std::max(out.lambda, 1e-300);
  // Fix sign so the largest-magnitude entry is positive (a no-op for the
  // nonnegative iterates produced by the all-ones start).
  double big = 0.0;
  for (double v : x)
    if (std::abs(v) > std::abs(big)) big = v;
  if (big < 0.0)
    for (double& v : x) v = -v;
  vec = std::move(x);
  return out;
}

// Dominant eigenvalue of B with both unit eigenvectors. The reported lambda
// and collapse diagnostics come from the right-side run.
inline EigenPair dominant_pair_nonbacktracking(const Graph& g, const DirectedEdgeIndex& idx,
                                               const PowerIterationOptions& opts = {}) {
  const NonbacktrackingOp op{&g, &idx};
  EigenPair right = power_iteration(op, Side::right, opts);
  EigenPair left = power_iteration(op, Side::left, opts);
  right.left = std::move(left.left);
  right.converged = right.converged && left.converged;
  right.iterations = std::max(right.iterations, left.iterations);
  return right;
}

/// First-order estimate of lambda_max(B) - lambda_max(R) for one candidate
/// source set. `degenerate` marks a vanishing denominator (the candidate
/// cannot be scored and is ranked worst by callers).
struct DeltaLambda {
  double value = 0.0;
  bool degenerate = false;
};

// Evaluates (v'·dB·u - v'·dB·u_S) / (v'·u - v'·u_S), where dB keeps exactly
// the columns of B whose tail node lies in S and u_S keeps the entries of u
// pointing into S. For a single source with no adjacent sources this reduces
// to sum_{i,k in d(s), k != i} v_{i->s} u_{s->k} over the same denominator.
inline DeltaLambda delta_lambda(const EigenPair& pair, const Graph& g,
                                const DirectedEdgeIndex& idx, std::span<const int> sources,
                                double cached_vu = -1.0) {
  if (sources.empty()) throw std::invalid_argument("delta_lambda: empty candidate set");
  DeltaLambda out;
  if (pair.right.size() != static_cast<std::size_t>(idx.directed_count()) ||
      pair.left.size() != pair.right.size()) {
    out.degenerate = true;
    return out;
  }
  const auto& u = pair.right;
  const auto& v = pair.left;

  double vu = cached_vu;
  if (vu < 0.0) {
    vu = 0.0;
    for (int e = 0; e < idx.directed_count(); ++e) vu += v[e] * u[e];
  }

  std::vector<std::uint8_t> in_set(g.node_count(), 0);
  for (int s : sources) {
    if (s < 0 || s >= g.node_count())
      throw std::invalid_argument("delta_lambda: candidate node out of range");
    in_set[s] = 1;
  }

  double numerator = 0.0;
  double den_drop = 0.0;
  for (int s : sources) {
    const auto& nbrs = g.neighbors(s);
    double v_in_total = 0.0;
    for (std::size_t pos = 0; pos < nbrs.size(); ++pos)
      v_in_total += v[idx.in_edge(s, static_cast<int>(pos))];
    for (std::size_t pos = 0; pos < nbrs.size(); ++pos) {
      const int p = static_cast<int>(pos);
      const double vin = v[idx.in_edge(s, p)];
      // Cross terms between adjacent candidate sources cancel out of the
      // numerator: only edges leaving the set contribute.
      if (!in_set[nbrs[pos]]) numerator += u[idx.out_edge(s, p)] * (v_in_total - vin);
      den_drop += vin * u[idx.in_edge(s, p)];
    }
  }

  const double denominator = vu - den_drop;
  if (!(denominator > 1e-12 * std::max(vu, 1e-30))) {
    out.degenerate = true;
    return out;
  }
  out.value = numerator / denominator;
  return out;
}

} // namespace rsid
