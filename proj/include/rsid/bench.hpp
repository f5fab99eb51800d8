#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rsid/errors.hpp"
#include "rsid/generators.hpp"
#include "rsid/graph.hpp"
#include "rsid/graph_io.hpp"
#include "rsid/metrics.hpp"
#include "rsid/parallel.hpp"
#include "rsid/rng.hpp"
#include "rsid/si_sim.hpp"
#include "rsid/source_id.hpp"
#include "rsid/spectral.hpp"
#include "rsid/text.hpp"

namespace rsid {

struct GeneratorSpec {
  enum class Kind { small_world, lattice, from_file };
  Kind kind = Kind::small_world;
  int n = 100;
  int k = 4;
  double beta = 0.1;
  int rows = 10;
  int cols = 10;
  std::string path;
};

// Compact CLI form: "sw:<n>,<k>,<beta>", "lattice:<rows>,<cols>",
// "file:<path>", or a bare path.
inline GeneratorSpec parse_graph_spec(const std::string& text) {
  GeneratorSpec spec;
  if (text.rfind("sw:", 0) == 0) {
    const auto parts = split(std::string_view(text).substr(3), ',');
    if (parts.size() != 3) throw DataError("graph spec: expected sw:<n>,<k>,<beta>");
    spec.kind = GeneratorSpec::Kind::small_world;
    spec.n = static_cast<int>(parse_int(parts[0], "small-world n"));
    spec.k = static_cast<int>(parse_int(parts[1], "small-world k"));
    spec.beta = parse_double(parts[2], "small-world beta");
  } else if (text.rfind("lattice:", 0) == 0) {
    const auto parts = split(std::string_view(text).substr(8), ',');
    if (parts.size() != 2) throw DataError("graph spec: expected lattice:<rows>,<cols>");
    spec.kind = GeneratorSpec::Kind::lattice;
    spec.rows = static_cast<int>(parse_int(parts[0], "lattice rows"));
    spec.cols = static_cast<int>(parse_int(parts[1], "lattice cols"));
  } else {
    spec.kind = GeneratorSpec::Kind::from_file;
    spec.path = text.rfind("file:", 0) == 0 ? text.substr(5) : text;
  }
  return spec;
}

// Real datasets are normalized to their largest connected component so that
// sampled sources can actually reach the target infection size.
inline Graph build_base_graph(const GeneratorSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::small_world: {
      Rng rng(seed);
      return generate_small_world(spec.n, spec.k, spec.beta, rng);
    }
    case GeneratorSpec::Kind::lattice:
      return generate_lattice(spec.rows, spec.cols);
    case GeneratorSpec::Kind::from_file: {
      std::ifstream in(spec.path);
      if (!in) throw DataError("cannot open graph file: " + spec.path);
      return largest_connected_component(load_snap_edge_list(in));
    }
  }
  throw InternalError("unhandled generator kind");
}

struct ExperimentConfig {
  GeneratorSpec generator;
  double p = 0.05;
  int source_count = 1;
  int target_infected = 400;
  int max_steps = 100000;
  std::vector<Method> methods;
  int instances = 1;
  std::uint64_t base_seed = 0;
  PowerIterationOptions power;
  DistanceScope scope = DistanceScope::snapshot;
  int retry_cap = 20;
  int threads = 0; // 0 = hardware concurrency
};

inline Method parse_method(std::string_view name) {
  if (name == "msi") return Method::msi;
  if (name == "pmsi") return Method::pmsi;
  if (name == "jc") return Method::jordan_center;
  if (name == "rc-bfs") return Method::rumor_center_bfs;
  throw DataError("unknown method: '" + std::string(name) + "'");
}

// Plain-text key=value configuration, '#' comments.
inline ExperimentConfig parse_experiment_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw DataError("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    const std::string what = "config key '" + std::string(key) + "'";
    if (key == "generator") {
      if (value == "sw")
        cfg.generator.kind = GeneratorSpec::Kind::small_world;
      else if (value == "lattice")
        cfg.generator.kind = GeneratorSpec::Kind::lattice;
      else if (value == "file")
        cfg.generator.kind = GeneratorSpec::Kind::from_file;
      else
        throw DataError("config: generator must be sw, lattice or file");
    } else if (key == "n")
      cfg.generator.n = static_cast<int>(parse_int(value, what));
    else if (key == "k")
      cfg.generator.k = static_cast<int>(parse_int(value, what));
    else if (key == "beta")
      cfg.generator.beta = parse_double(value, what);
    else if (key == "rows")
      cfg.generator.rows = static_cast<int>(parse_int(value, what));
    else if (key == "cols")
      cfg.generator.cols = static_cast<int>(parse_int(value, what));
    else if (key == "path")
      cfg.generator.path = std::string(value);
    else if (key == "p")
      cfg.p = parse_double(value, what);
    else if (key == "source_count")
      cfg.source_count = static_cast<int>(parse_int(value, what));
    else if (key == "target")
      cfg.target_infected = static_cast<int>(parse_int(value, what));
    else if (key == "max_steps")
      cfg.max_steps = static_cast<int>(parse_int(value, what));
    else if (key == "methods") {
      cfg.methods.clear();
      for (const auto piece : split(value, ','))
        if (!trim(piece).empty()) cfg.methods.push_back(parse_method(trim(piece)));
    } else if (key == "instances")
      cfg.instances = static_cast<int>(parse_int(value, what));
    else if (key == "base_seed")
      cfg.base_seed = static_cast<std::uint64_t>(parse_int(value, what));
    else if (key == "power_iters")
      cfg.power.iterations = static_cast<int>(parse_int(value, what));
    else if (key == "converge")
      cfg.power.run_to_convergence = (value == "true" || value == "1");
    else if (key == "distance_scope") {
      if (value == "snapshot")
        cfg.scope = DistanceScope::snapshot;
      else if (value == "network")
        cfg.scope = DistanceScope::network;
      else
        throw DataError("config: distance_scope must be snapshot or network");
    } else if (key == "retry_cap")
      cfg.retry_cap = static_cast<int>(parse_int(value, what));
    else if (key == "threads")
      cfg.threads = static_cast<int>(parse_int(value, what));
    else
      throw DataError("config line " + std::to_string(line_no) + ": unknown key '" +
                      std::string(key) + "'");
  }
  return cfg;
}

struct InstanceRecord {
  int instance = 0;
  std::string method;
  std::vector<int> true_sources;
  std::vector<int> chosen;
  bool exact = false;
  bool one_hop = false;
  double error_distance = 0.0;
  int snapshot_nodes = 0;
  int snapshot_edges = 0;
  int snapshot_diameter = 0;

  bool operator==(const InstanceRecord&) const = default;
};

struct MethodAggregate {
  std::string method;
  double accuracy = 0.0;
  double one_hop_accuracy = 0.0;
  double avg_error_distance = 0.0;

  bool operator==(const MethodAggregate&) const = default;
};

struct DiameterStats {
  double mean = 0.0;
  int min = 0;
  int max = 0;

  bool operator==(const DiameterStats&) const = default;
};

struct MetricsReport {
  std::vector<MethodAggregate> aggregates;
  std::vector<InstanceRecord> records;
  DiameterStats diameters;

  bool operator==(const MetricsReport&) const = default;
};

namespace detail {

inline std::vector<int> sample_distinct(Rng& rng, int population, int count) {
  std::vector<int> out;
  while (static_cast<int>(out.size()) < count) {
    const int v = static_cast<int>(rng.uniform_index(population));
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline IdentificationResult run_method(Method m, const Graph& snapshot_graph, int source_count,
                                       const PowerIterationOptions& power) {
  switch (m) {
    case Method::msi: return msi(snapshot_graph, source_count, power);
    case Method::pmsi: return pmsi(snapshot_graph, source_count, power);
    case Method::jordan_center: return jordan_center(snapshot_graph);
    case Method::rumor_center_bfs: return rumor_center_bfs(snapshot_graph);
  }
  throw InternalError("unhandled method");
}

} // namespace detail

// Monte-Carlo pipeline: per instance, build/reuse the base network, pick
// sources uniformly, spread to the target size, snapshot, run every method
// and score it. Underfilled spreads are logged and resampled with a fresh
// derived seed up to cfg.retry_cap times. Instances run concurrently; every
// result lands in a per-instance slot so reports are seed-deterministic.
inline MetricsReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.instances < 1) throw DataError("experiment: instances must be >= 1");
  if (cfg.source_count < 1) throw DataError("experiment: source_count must be >= 1");
  for (Method m : cfg.methods)
    if ((m == Method::jordan_center || m == Method::rumor_center_bfs) && cfg.source_count != 1)
      throw DataError("experiment: " + method_name(m) + " identifies single sources only");

  const bool fixed_base = cfg.generator.kind == GeneratorSpec::Kind::from_file;
  Graph shared_base;
  if (fixed_base) shared_base = build_base_graph(cfg.generator, 0);

  const std::size_t methods = cfg.methods.size();
  std::vector<InstanceRecord> records(static_cast<std::size_t>(cfg.instances) * methods);
  std::vector<int> diameters(cfg.instances, 0);

  parallel_for(static_cast<std::size_t>(cfg.instances), cfg.threads, [&](std::size_t i) {
    const std::uint64_t instance_seed = mix_seed(cfg.base_seed, i);
    Snapshot snap;
    Graph local_base;
    const Graph* base = fixed_base ? &shared_base : &local_base;
    bool ok = false;
    for (int retry = 0; retry <= cfg.retry_cap && !ok; ++retry) {
      const std::uint64_t attempt_seed =
          retry == 0 ? instance_seed : mix_seed(instance_seed, 1000 + retry);
      try {
        if (!fixed_base) local_base = build_base_graph(cfg.generator, mix_seed(attempt_seed, 0));
        Rng source_rng(mix_seed(attempt_seed, 3));
        SpreadConfig spread;
        spread.p = cfg.p;
        spread.sources = detail::sample_distinct(source_rng, base->node_count(), cfg.source_count);
        spread.target_infected = cfg.target_infected;
        spread.max_steps = cfg.max_steps;
        spread.seed = mix_seed(attempt_seed, 1);
        const InfectionTrace trace = simulate_si(*base, spread);
        Rng trim_rng(mix_seed(attempt_seed, 2));
        snap = take_snapshot(*base, trace, cfg.target_infected, cfg.p, trim_rng);
        ok = true;
      } catch (const UnderfilledError& e) {
        std::fprintf(stderr, "instance %zu attempt %d underfilled: %s\n", i, retry, e.what());
      }
    }
    if (!ok)
      throw DataError("instance " + std::to_string(i) + ": spread kept underfilling after " +
                      std::to_string(cfg.retry_cap) + " retries");

    diameters[i] = diameter(snap.graph);
    for (std::size_t m = 0; m < methods; ++m) {
      const IdentificationResult res =
          detail::run_method(cfg.methods[m], snap.graph, cfg.source_count, cfg.power);
      const InstanceEvaluation ev =
          evaluate_instance(res, snap, cfg.scope, fixed_base ? &shared_base : base);
      InstanceRecord& rec = records[i * methods + m];
      rec.instance = static_cast<int>(i);
      rec.method = method_name(cfg.methods[m]);
      rec.true_sources = *snap.true_sources;
      rec.chosen = res.chosen;
      rec.exact = ev.exact;
      rec.one_hop = ev.one_hop;
      rec.error_distance = ev.error_distance;
      rec.snapshot_nodes = snap.graph.node_count();
      rec.snapshot_edges = snap.graph.edge_count();
      rec.snapshot_diameter = diameters[i];
    }
  });

  MetricsReport report;
  report.records = std::move(records);
  for (std::size_t m = 0; m < methods; ++m) {
    MethodAggregate agg;
    agg.method = method_name(cfg.methods[m]);
    for (int i = 0; i < cfg.instances; ++i) {
      const auto& rec = report.records[static_cast<std::size_t>(i) * methods + m];
      agg.accuracy += rec.exact ? 1.0 : 0.0;
      agg.one_hop_accuracy += rec.one_hop ? 1.0 : 0.0;
      agg.avg_error_distance += rec.error_distance;
    }
    agg.accuracy /= cfg.instances;
    agg.one_hop_accuracy /= cfg.instances;
    agg.avg_error_distance /= cfg.instances;
    report.aggregates.push_back(std::move(agg));
  }
  if (!diameters.empty()) {
    report.diameters.min = *std::min_element(diameters.begin(), diameters.end());
    report.diameters.max = *std::max_element(diameters.begin(), diameters.end());
    double sum = 0.0;
    for (int d : diameters) sum += d;
    report.diameters.mean = sum / static_cast<double>(diameters.size());
  }
  return report;
}

inline void write_aggregate_csv(std::ostream& os, const MetricsReport& report) {
  os << "method,accuracy,one_hop_accuracy,avg_error_distance\n";
  for (const auto& a : report.aggregates)
    os << a.method << ',' << format_double(a.accuracy) << ',' << format_double(a.one_hop_accuracy)
       << ',' << format_double(a.avg_error_distance) << '\n';
}

inline void write_instances_csv(std::ostream& os, const MetricsReport& report) {
  os << "instance,method,true_sources,chosen,exact,one_hop,error_distance,"
        "snapshot_nodes,snapshot_edges,snapshot_diameter\n";
  for (const auto& r : report.records)
    os << r.instance << ',' << r.method << ',' << join_ints(r.true_sources, '|') << ','
       << join_ints(r.chosen, '|') << ',' << (r.exact ? 1 : 0) << ',' << (r.one_hop ? 1 : 0) << ','
       << format_double(r.error_distance) << ',' << r.snapshot_nodes << ',' << r.snapshot_edges
       << ',' << r.snapshot_diameter << '\n';
}

inline nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json j;
  j["aggregates"] = nlohmann::json::array();
  for (const auto& a : report.aggregates)
    j["aggregates"].push_back({{"method", a.method},
                               {"accuracy", a.accuracy},
                               {"one_hop_accuracy", a.one_hop_accuracy},
                               {"avg_error_distance", a.avg_error_distance}});
  j["instances"] = nlohmann::json::array();
  for (const auto& r : report.records)
    j["instances"].push_back({{"instance", r.instance},
                              {"method", r.method},
                              {"true_sources", r.true_sources},
                              {"chosen", r.chosen},
                              {"exact", r.exact},
                              {"one_hop", r.one_hop},
                              {"error_distance", r.error_distance},
                              {"snapshot_nodes", r.snapshot_nodes},
                              {"snapshot_edges", r.snapshot_edges},
                              {"snapshot_diameter", r.snapshot_diameter}});
  j["diameter_stats"] = {{"mean", report.diameters.mean},
                         {"min", report.diameters.min},
                         {"max", report.diameters.max}};
  return j;
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
  MetricsReport report;
  for (const auto& a : j.at("aggregates"))
    report.aggregates.push_back({a.at("method").get<std::string>(), a.at("accuracy").get<double>(),
                                 a.at("one_hop_accuracy").get<double>(),
                                 a.at("avg_error_distance").get<double>()});
  for (const auto& r : j.at("instances")) {
    InstanceRecord rec;
    rec.instance = r.at("instance").get<int>();
    rec.method = r.at("method").get<std::string>();
    rec.true_sources = r.at("true_sources").get<std::vector<int>>();
    rec.chosen = r.at("chosen").get<std::vector<int>>();
    rec.exact = r.at("exact").get<bool>();
    rec.one_hop = r.at("one_hop").get<bool>();
    rec.error_distance = r.at("error_distance").get<double>();
    rec.snapshot_nodes = r.at("snapshot_nodes").get<int>();
    rec.snapshot_edges = r.at("snapshot_edges").get<int>();
    rec.snapshot_diameter = r.at("snapshot_diameter").get<int>();
    report.records.push_back(std::move(rec));
  }
  const auto& d = j.at("diameter_stats");
  report.diameters = {d.at("mean").get<double>(), d.at("min").get<int>(), d.at("max").get<int>()};
  return report;
}

// Writes aggregate.csv, instances.csv and report.json under out_dir.
inline void export_report(const MetricsReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto open = [](const std::filesystem::path& p) {
    std::ofstream os(p);
    if (!os) throw DataError("cannot write " + p.string());
    return os;
  };
  {
    auto os = open(out_dir / "aggregate.csv");
    write_aggregate_csv(os, report);
  }
  {
    auto os = open(out_dir / "instances.csv");
    write_instances_csv(os, report);
  }
  {
    auto os = open(out_dir / "report.json");
    os << report_to_json(report).dump(2) << '\n';
  }
}

} // namespace rsid
