#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsid/errors.hpp"
#include "rsid/graph.hpp"
#include "rsid/rng.hpp"
#include "rsid/text.hpp"

namespace rsid {

struct SpreadConfig {
  double p = 0.05;            // per-step per-edge infection probability
  std::vector<int> sources;   // infected at time zero
  int target_infected = 0;    // stop once this many nodes are infected
  int max_steps = 100000;
  std::uint64_t seed = 0;
};

struct InfectionTrace {
  std::vector<int> infection_time; // 0 for sources, kUnreachable if never infected
  int step_reached = 0;
  int infected_count = 0;
};

// Spread stopped before reaching the requested size (cap hit or the
// reachable component saturated). Carries the partial trace.
class UnderfilledError : public DataError {
public:
  UnderfilledError(const std::string& msg, InfectionTrace trace)
      : DataError(msg), partial(std::move(trace)) {}
  InfectionTrace partial;
};

// Time-slotted SI dynamics: at every step each node infected before the step
// attacks each neighbor that was susceptible at the start of the step,
// independently with probability p. Nodes infected during a step become
// active at the next one. Draws are made in ascending (infector, neighbor)
// order, so a seed fixes the trace bit-for-bit.
inline InfectionTrace simulate_si(const Graph& g, const SpreadConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw std::invalid_argument("simulate_si: need 0 < p <= 1");
  if (cfg.sources.empty()) throw std::invalid_argument("simulate_si: no sources");
  for (int s : cfg.sources)
    if (s < 0 || s >= g.node_count())
      throw std::invalid_argument("simulate_si: source out of range");
  if (cfg.target_infected < static_cast<int>(cfg.sources.size()))
    throw std::invalid_argument("simulate_si: target below source count");
  if (cfg.max_steps < 0) throw std::invalid_argument("simulate_si: negative step cap");

  InfectionTrace trace;
  trace.infection_time.assign(g.node_count(), kUnreachable);
  for (int s : cfg.sources) trace.infection_time[s] = 0;
  trace.infected_count = 0;
  for (int t : trace.infection_time)
    if (t == 0) ++trace.infected_count;

  Rng rng(cfg.seed);
  if (trace.infected_count >= cfg.target_infected) return trace;

  auto& time = trace.infection_time;
  for (int step = 1; step <= cfg.max_steps; ++step) {
    trace.step_reached = step;
    long long attempts = 0;
    for (int u = 0; u < g.node_count(); ++u) {
      if (time[u] >= step) continue; // not infected before this step
      for (int w : g.neighbors(u)) {
        if (time[w] < step) continue; // already infected at step start
        ++attempts;
        if (rng.bernoulli(cfg.p) && time[w] == kUnreachable) {
          time[w] = step;
          ++trace.infected_count;
        }
      }
    }
    if (trace.infected_count >= cfg.target_infected) return trace;
    if (attempts == 0)
      throw UnderfilledError("spread saturated at " + std::to_string(trace.infected_count) +
                                 " of " + std::to_string(cfg.target_infected) + " nodes",
                             trace);
  }
  throw UnderfilledError("spread reached only " + std::to_string(trace.infected_count) + " of " +
                             std::to_string(cfg.target_infected) + " nodes in " +
                             std::to_string(cfg.max_steps) + " steps",
                         trace);
}

/// Observed infected subgraph, relabeled to 0..N-1. `true_sources` is absent
/// for snapshots loaded from external files with unknown provenance.
/// `origin_ids` maps snapshot ids back to the base network (empty when the
/// snapshot was read from a file).
struct Snapshot {
  Graph graph;
  std::optional<std::vector<int>> true_sources;
  double p = 0.0;
  std::vector<int> origin_ids;
};

// Extracts the snapshot from a trace. If the final step overshot the target,
// last-step infectees are dropped uniformly at random down to the exact
// size; every retained non-source node must keep a retained neighbor with a
// strictly smaller infection time, otherwise the trim is rejected.
inline Snapshot take_snapshot(const Graph& g, const InfectionTrace& trace, int target_infected,
                              double p, Rng& rng) {
  std::vector<int> infected;
  for (int v = 0; v < g.node_count(); ++v)
    if (trace.infection_time[v] != kUnreachable) infected.push_back(v);
  if (static_cast<int>(infected.size()) < target_infected)
    throw std::invalid_argument("take_snapshot: trace has fewer infected nodes than requested");

  std::vector<int> retained;
  if (static_cast<int>(infected.size()) == target_infected) {
    retained = infected;
  } else {
    int last_step = 0;
    for (int v : infected) last_step = std::max(last_step, trace.infection_time[v]);
    std::vector<int> last;
    for (int v : infected) {
      if (trace.infection_time[v] == last_step)
        last.push_back(v);
      else
        retained.push_back(v);
    }
    const int need = target_infected - static_cast<int>(retained.size());
    if (need < 0)
      throw DataError("take_snapshot: cannot trim to target by dropping last-step nodes only");
    for (int i = 0; i < need; ++i) {
      const std::size_t j = i + rng.uniform_index(last.size() - i);
      std::swap(last[i], last[j]);
    }
    retained.insert(retained.end(), last.begin(), last.begin() + need);
    std::sort(retained.begin(), retained.end());
  }

  std::vector<std::uint8_t> keep(g.node_count(), 0);
  for (int v : retained) keep[v] = 1;
  for (int v : retained) {
    if (trace.infection_time[v] == 0) continue;
    bool has_parent = false;
    for (int w : g.neighbors(v))
      if (keep[w] && trace.infection_time[w] < trace.infection_time[v]) {
        has_parent = true;
        break;
      }
    if (!has_parent) throw DataError("take_snapshot: trim would break infection feasibility");
  }

  auto sub = induced_subgraph(g, retained);
  std::vector<int> sources;
  for (std::size_t i = 0; i < sub.to_original.size(); ++i)
    if (trace.infection_time[sub.to_original[i]] == 0) sources.push_back(static_cast<int>(i));

  Snapshot snap;
  snap.graph = std::move(sub.graph);
  snap.true_sources = std::move(sources);
  snap.p = p;
  snap.origin_ids = std::move(sub.to_original);
  return snap;
}

// Text format: a header "p=<float> sources=<comma list or '?'>", a
// "# nodes=<N>" comment (so trailing isolated nodes survive a round trip),
// then one "u v" edge per line.
inline void write_snapshot(std::ostream& os, const Snapshot& snap) {
  os << "p=" << format_double(snap.p) << " sources=";
  if (snap.true_sources)
    os << (snap.true_sources->empty() ? std::string("?") : join_ints(*snap.true_sources));
  else
    os << '?';
  os << '\n';
  os << "# nodes=" << snap.graph.node_count() << '\n';
  for (const auto& [a, b] : snap.graph.edges()) os << a << ' ' << b << '\n';
}

inline Snapshot read_snapshot(std::istream& is) {
  Snapshot snap;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  int forced_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(is, line)) {
    ++line_no;
    const auto s = trim(line);
    if (s.empty()) continue;
    if (!have_header) {
      const auto tokens = split_whitespace(s);
      if (tokens.size() != 2 || !tokens[0].starts_with("p=") || !tokens[1].starts_with("sources="))
        throw DataError("snapshot line 1: expected 'p=<float> sources=<list|?>'");
      snap.p = parse_double(tokens[0].substr(2), "snapshot p");
      const auto src = tokens[1].substr(8);
      if (src == "?") {
        snap.true_sources.reset();
      } else {
        std::vector<int> srcs;
        for (const auto piece : split(src, ','))
          srcs.push_back(static_cast<int>(parse_int(piece, "snapshot source id")));
        std::sort(srcs.begin(), srcs.end());
        srcs.erase(std::unique(srcs.begin(), srcs.end()), srcs.end());
        snap.true_sources = std::move(srcs);
      }
      have_header = true;
      continue;
    }
    if (s.front() == '#') {
      const auto body = trim(s.substr(1));
      if (body.starts_with("nodes="))
        forced_nodes = static_cast<int>(parse_int(body.substr(6), "snapshot node count"));
      continue;
    }
    const auto tokens = split_whitespace(s);
    if (tokens.size() != 2)
      throw DataError("snapshot line " + std::to_string(line_no) + ": expected 'u v'");
    const long long a = parse_int(tokens[0], "snapshot edge endpoint");
    const long long b = parse_int(tokens[1], "snapshot edge endpoint");
    if (a < 0 || b < 0)
      throw DataError("snapshot line " + std::to_string(line_no) + ": negative node id");
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  if (!have_header) throw DataError("snapshot file is empty");
  snap.graph = Graph::from_edge_list(edges, forced_nodes);
  if (snap.true_sources)
    for (int s : *snap.true_sources)
      if (s < 0 || s >= snap.graph.node_count())
        throw DataError("snapshot source id " + std::to_string(s) + " outside graph");
  return snap;
}

} // namespace rsid
