#pragma once

#include <istream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rsid/errors.hpp"
#include "rsid/graph.hpp"
#include "rsid/text.hpp"

namespace rsid {

// SNAP-style edge list: '#'-prefixed comment lines, one "u v" pair per
// non-comment line, arbitrary whitespace. Raw ids are compacted to 0..N-1 in
// first-appearance order.
inline Graph load_snap_edge_list(std::istream& is) {
  std::unordered_map<long long, int> compact;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int line_no = 0;
  const auto id_of = [&compact](long long raw) {
    const auto [it, inserted] = compact.try_emplace(raw, static_cast<int>(compact.size()));
    return it->second;
  };
  while (std::getline(is, line)) {
    ++line_no;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto tokens = split_whitespace(s);
    if (tokens.size() != 2)
      throw DataError("edge list line " + std::to_string(line_no) + ": expected 'u v'");
    long long a, b;
    try {
      a = parse_int(tokens[0], "node id");
      b = parse_int(tokens[1], "node id");
    } catch (const DataError& e) {
      throw DataError("edge list line " + std::to_string(line_no) + ": " + e.what());
    }
    if (a < 0 || b < 0)
      throw DataError("edge list line " + std::to_string(line_no) + ": negative node id");
    const int ca = id_of(a); // first-appearance order: compact a before b
    const int cb = id_of(b);
    edges.emplace_back(ca, cb);
  }
  return Graph::from_edge_list(edges, static_cast<int>(compact.size()));
}

// Induced subgraph of the largest connected component, relabeled to
// 0..size-1. Ties go to the component containing the smallest node id.
inline Graph largest_connected_component(const Graph& g) {
  if (g.node_count() == 0) throw DataError("largest_connected_component: empty graph");
  const auto label = component_labels(g);
  int labels = 0;
  for (int l : label) labels = std::max(labels, l + 1);
  std::vector<int> size(labels, 0);
  for (int l : label) ++size[l];
  int best = 0;
  for (int l = 1; l < labels; ++l)
    if (size[l] > size[best]) best = l; // labels are ordered by smallest contained id
  std::vector<int> nodes;
  nodes.reserve(size[best]);
  for (int v = 0; v < g.node_count(); ++v)
    if (label[v] == best) nodes.push_back(v);
  return induced_subgraph(g, nodes).graph;
}

} // namespace rsid
