#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsid/errors.hpp"
#include "rsid/graph.hpp"
#include "rsid/nonbacktracking.hpp"

namespace rsid {

/// Edge-space message vector v_{i->j}^{(t)}: probability that i has not
/// passed the rumor to j by step t.
struct MessageState {
  std::vector<double> v;
  int t = 0;
};

/// Per-node probability of not being infected by the state's time step.
struct NodeSurvival {
  std::vector<double> p;
};

enum class NormKind { l2, l1 };

namespace detail {

// f_{i->j} = n_i * prod_{k in d(i) \ j} v_{k->i}, evaluated for every
// directed edge in O(M) with prefix/suffix products (no division, so exact
// zeros are handled).
inline std::vector<double> message_product(const Graph& g, const DirectedEdgeIndex& idx,
                                           const SourceIndicator& n,
                                           std::span<const double> v) {
  std::vector<double> f(v.size(), 0.0);
  std::vector<double> pre, suf;
  for (int i = 0; i < g.node_count(); ++i) {
    const int deg = static_cast<int>(g.neighbors(i).size());
    const double ni = n.factor(i);
    if (ni == 0.0) continue; // whole block zero
    pre.assign(deg + 1, 1.0);
    suf.assign(deg + 1, 1.0);
    for (int pos = 0; pos < deg; ++pos) pre[pos + 1] = pre[pos] * v[idx.in_edge(i, pos)];
    for (int pos = deg - 1; pos >= 0; --pos) suf[pos] = suf[pos + 1] * v[idx.in_edge(i, pos)];
    for (int pos = 0; pos < deg; ++pos) f[idx.out_edge(i, pos)] = pre[pos] * suf[pos + 1];
  }
  return f;
}

inline void clamp_unit_interval(std::vector<double>& v) {
  for (double& e : v) {
    if (e < -1e-12 || e > 1.0 + 1e-12)
      throw InternalError("message value left [0,1] beyond round-off tolerance");
    if (e < 0.0) e = 0.0;
    if (e > 1.0) e = 1.0;
  }
}

} // namespace detail

// Exact evolution of the nonlinear message-passing system from v^(0) = 1:
//   v^(t) = 1 - sum_{tau=1..t} (1-p)^(tau-1) p [1 - f(v^(t-tau))].
// For moderate horizons the convolution is evaluated against the full
// history; past 1000 steps the geometric kernel is folded into the exact
// one-step recursion a^(t+1) = p(1 - f(v^(t))) + (1-p) a^(t).
inline std::vector<MessageState> evolve_nonlinear(const Graph& g, const DirectedEdgeIndex& idx,
                                                  const SourceIndicator& n, double p, int T) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("evolve_nonlinear: need 0 < p < 1");
  if (T < 0) throw std::invalid_argument("evolve_nonlinear: negative horizon");
  if (n.node_count() != g.node_count())
    throw std::invalid_argument("evolve_nonlinear: indicator size mismatch");
  const int dim = idx.directed_count();
  std::vector<MessageState> states;
  states.reserve(T + 1);
  states.push_back({std::vector<double>(dim, 1.0), 0});

  if (T <= 1000) {
    std::vector<std::vector<double>> brackets; // 1 - f(v^(s)) for s = 0..t-1
    brackets.reserve(T);
    for (int t = 1; t <= T; ++t) {
      {
        auto f = detail::message_product(g, idx, n, states.back().v);
        for (double& e : f) e = 1.0 - e;
        brackets.push_back(std::move(f));
      }
      std::vector<double> acc(dim, 0.0);
      double w = p; // (1-p)^(tau-1) p
      for (int tau = 1; tau <= t; ++tau) {
        const auto& b = brackets[t - tau];
        for (int e = 0; e < dim; ++e) acc[e] += w * b[e];
        w *= (1.0 - p);
      }
      for (int e = 0; e < dim; ++e) acc[e] = 1.0 - acc[e];
      detail::clamp_unit_interval(acc);
      states.push_back({std::move(acc), t});
    }
  } else {
    std::vector<double> a(dim, 0.0);
    for (int t = 1; t <= T; ++t) {
      const auto f = detail::message_product(g, idx, n, states.back().v);
      std::vector<double> next(dim);
      for (int e = 0; e < dim; ++e) {
        a[e] = p * (1.0 - f[e]) + (1.0 - p) * a[e];
        next[e] = 1.0 - a[e];
      }
      detail::clamp_unit_interval(next);
      states.push_back({std::move(next), t});
    }
  }
  return states;
}

// Linear approximation around v = 1, evolved through the reduced
// nonbacktracking matrix (left action):
//   u^(0) = 0,  u^(t+1) = p(e - n) + u^(t) [(1-p) I + p R].
// Iterates are not clamped; they may exceed 1 once the approximation leaves
// its small-t validity window.
inline std::vector<std::vector<double>> evolve_linear(const Graph& g, const DirectedEdgeIndex& idx,
                                                      const SourceIndicator& n, double p, int T) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("evolve_linear: need 0 < p < 1");
  if (T < 0) throw std::invalid_argument("evolve_linear: negative horizon");
  if (n.node_count() != g.node_count())
    throw std::invalid_argument("evolve_linear: indicator size mismatch");
  const int dim = idx.directed_count();

  std::vector<double> forcing(dim, 0.0); // (e - n)_{i->j} = 1 for source tails
  for (int i = 0; i < g.node_count(); ++i) {
    if (!n.is_source(i)) continue;
    const int deg = static_cast<int>(g.neighbors(i).size());
    for (int pos = 0; pos < deg; ++pos) forcing[idx.out_edge(i, pos)] = 1.0;
  }

  std::vector<std::vector<double>> us;
  us.reserve(T + 1);
  us.emplace_back(dim, 0.0);
  for (int t = 1; t <= T; ++t) {
    const auto& u = us.back();
    const auto ur = apply_reduced(g, idx, n, u, Side::left);
    std::vector<double> next(dim);
    for (int e = 0; e < dim; ++e) next[e] = p * forcing[e] + (1.0 - p) * u[e] + p * ur[e];
    us.push_back(std::move(next));
  }
  return us;
}

// P_i^(t) = n_i * prod_{j in d(i)} v_{j->i}^(t).
inline NodeSurvival survival_probabilities(const Graph& g, const DirectedEdgeIndex& idx,
                                           const MessageState& state, const SourceIndicator& n) {
  if (state.v.size() != static_cast<std::size_t>(idx.directed_count()))
    throw std::invalid_argument("survival_probabilities: state dimension mismatch");
  NodeSurvival out;
  out.p.assign(g.node_count(), 0.0);
  for (int i = 0; i < g.node_count(); ++i) {
    if (n.is_source(i)) continue;
    double prod = 1.0;
    const int deg = static_cast<int>(g.neighbors(i).size());
    for (int pos = 0; pos < deg; ++pos) prod *= state.v[idx.in_edge(i, pos)];
    out.p[i] = prod;
  }
  return out;
}

// u = 1 - v, the per-edge probability that the rumor has been passed.
inline std::vector<double> passed_fraction(const MessageState& state) {
  std::vector<double> u(state.v.size());
  for (std::size_t e = 0; e < u.size(); ++e) u[e] = 1.0 - state.v[e];
  return u;
}

inline std::vector<double> trajectory_norms(std::span<const std::vector<double>> us,
                                            NormKind kind = NormKind::l2) {
  std::vector<double> out;
  out.reserve(us.size());
  for (const auto& u : us) {
    double s = 0.0;
    if (kind == NormKind::l2) {
      for (double e : u) s += e * e;
      s = std::sqrt(s);
    } else {
      for (double e : u) s += std::abs(e);
    }
    out.push_back(s);
  }
  return out;
}

} // namespace rsid
