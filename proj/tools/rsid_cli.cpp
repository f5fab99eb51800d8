// Command-line front end: SI snapshot simulation, source identification,
// Monte-Carlo benchmarking, and message-passing trajectory export.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
// violation.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rsid/bench.hpp"
#include "rsid/errors.hpp"
#include "rsid/graph.hpp"
#include "rsid/message_passing.hpp"
#include "rsid/metrics.hpp"
#include "rsid/rng.hpp"
#include "rsid/si_sim.hpp"
#include "rsid/source_id.hpp"
#include "rsid/spectral.hpp"
#include "rsid/text.hpp"

namespace {

struct SimulateArgs {
  std::string graph_spec;
  double p = 0.05;
  int sources = 1;
  int target = 400;
  int max_steps = 100000;
  std::uint64_t seed = 0;
  std::string out;
};

struct IdentifyArgs {
  std::string snapshot_path;
  std::string method = "msi";
  int num_sources = 1;
  int power_iters = 20;
  bool converge = false;
  int threads = 0;
  int top = 10;
};

struct BenchArgs {
  std::string config_path;
  std::string out_dir;
};

struct TrajectoryArgs {
  std::string snapshot_path;
  std::string indicator = "true";
  std::string mode = "nonlinear";
  int steps = 50;
  std::string norm = "l2";
  std::uint64_t seed = 0;
  std::string out;
};

rsid::Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rsid::DataError("cannot open snapshot file: " + path);
  return rsid::read_snapshot(in);
}

int run_simulate(const SimulateArgs& args) {
  const auto spec = rsid::parse_graph_spec(args.graph_spec);
  const rsid::Graph base = rsid::build_base_graph(spec, rsid::mix_seed(args.seed, 0));

  rsid::Rng source_rng(rsid::mix_seed(args.seed, 3));
  rsid::SpreadConfig cfg;
  cfg.p = args.p;
  cfg.sources = rsid::detail::sample_distinct(source_rng, base.node_count(), args.sources);
  cfg.target_infected = args.target;
  cfg.max_steps = args.max_steps;
  cfg.seed = rsid::mix_seed(args.seed, 1);

  const rsid::InfectionTrace trace = rsid::simulate_si(base, cfg);
  rsid::Rng trim_rng(rsid::mix_seed(args.seed, 2));
  const rsid::Snapshot snap = rsid::take_snapshot(base, trace, args.target, args.p, trim_rng);

  std::ofstream out(args.out);
  if (!out) throw rsid::DataError("cannot write snapshot file: " + args.out);
  rsid::write_snapshot(out, snap);
  std::cout << "snapshot nodes=" << snap.graph.node_count()
            << " edges=" << snap.graph.edge_count() << " steps=" << trace.step_reached << '\n';
  return 0;
}

int run_identify(const IdentifyArgs& args) {
  const rsid::Snapshot snap = load_snapshot(args.snapshot_path);
  const rsid::Method method = rsid::parse_method(args.method);
  if ((method == rsid::Method::jordan_center || method == rsid::Method::rumor_center_bfs) &&
      args.num_sources != 1)
    throw CLI::ValidationError("--num-sources", args.method + " identifies single sources only");

  rsid::PowerIterationOptions power;
  power.iterations = args.power_iters;
  power.run_to_convergence = args.converge;

  rsid::IdentificationResult res;
  switch (method) {
    case rsid::Method::msi: res = rsid::msi(snap.graph, args.num_sources, power, args.threads); break;
    case rsid::Method::pmsi:
      res = rsid::pmsi(snap.graph, args.num_sources, power, args.threads);
      break;
    case rsid::Method::jordan_center: res = rsid::jordan_center(snap.graph); break;
    case rsid::Method::rumor_center_bfs: res = rsid::rumor_center_bfs(snap.graph); break;
  }

  std::cout << "method=" << rsid::method_name(res.method) << '\n'
            << "snapshot_nodes=" << snap.graph.node_count() << '\n'
            << "num_sources=" << args.num_sources << '\n'
            << "chosen=" << rsid::join_ints(res.chosen) << '\n'
            << "score=" << rsid::format_double(res.ranked.front().score) << '\n';
  if (snap.true_sources && !snap.true_sources->empty()) {
    const auto ev = rsid::evaluate_instance(res, snap);
    std::cout << "true_sources=" << rsid::join_ints(*snap.true_sources) << '\n'
              << "exact=" << (ev.exact ? 1 : 0) << '\n'
              << "one_hop=" << (ev.one_hop ? 1 : 0) << '\n'
              << "error_distance=" << rsid::format_double(ev.error_distance) << '\n';
  }
  std::cout << "rank,nodes,score,degenerate\n";
  const std::size_t shown = std::min<std::size_t>(args.top, res.ranked.size());
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& cs = res.ranked[i];
    std::cout << (i + 1) << ',' << rsid::join_ints(cs.nodes, '+') << ','
              << rsid::format_double(cs.score) << ',' << (cs.degenerate ? 1 : 0) << '\n';
  }
  return 0;
}

int run_bench(const BenchArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) throw rsid::DataError("cannot open config file: " + args.config_path);
  const rsid::ExperimentConfig cfg = rsid::parse_experiment_config(in);
  const auto t0 = std::chrono::steady_clock::now();
  const rsid::MetricsReport report = rsid::run_experiment(cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rsid::export_report(report, args.out_dir);
  rsid::write_aggregate_csv(std::cout, report);
  std::cout << "snapshot_diameter_mean=" << rsid::format_double(report.diameters.mean) << '\n';
  std::cerr << "bench: " << cfg.instances << " instances in " << elapsed << " s, reports in "
            << args.out_dir << '\n';
  return 0;
}

int run_trajectory(const TrajectoryArgs& args) {
  const rsid::Snapshot snap = load_snapshot(args.snapshot_path);
  if (!(snap.p > 0.0 && snap.p < 1.0))
    throw rsid::DataError("trajectory needs a snapshot probability p in (0,1), got p=" +
                          rsid::format_double(snap.p));
  const rsid::DirectedEdgeIndex idx(snap.graph);

  std::vector<int> indicator_nodes;
  std::string label;
  if (args.indicator == "true") {
    if (!snap.true_sources || snap.true_sources->empty())
      throw rsid::DataError("snapshot carries no ground-truth sources; use --indicator random or node:<id>");
    indicator_nodes = *snap.true_sources;
    label = "true-source";
  } else if (args.indicator == "random") {
    const int count =
        snap.true_sources && !snap.true_sources->empty()
            ? static_cast<int>(snap.true_sources->size())
            : 1;
    rsid::Rng rng(args.seed);
    indicator_nodes = rsid::detail::sample_distinct(rng, snap.graph.node_count(), count);
    label = "random-source-" + rsid::join_ints(indicator_nodes, '+');
  } else if (args.indicator.rfind("node:", 0) == 0) {
    indicator_nodes = {static_cast<int>(rsid::parse_int(
        std::string_view(args.indicator).substr(5), "indicator node id"))};
    label = "node-" + std::to_string(indicator_nodes[0]);
  } else {
    throw CLI::ValidationError("--indicator", "expected true, random or node:<id>");
  }
  label += (args.mode == "linear") ? "-linear" : "-nonlinear";

  const rsid::SourceIndicator ind(snap.graph.node_count(), indicator_nodes);
  std::vector<std::vector<double>> us;
  if (args.mode == "linear") {
    us = rsid::evolve_linear(snap.graph, idx, ind, snap.p, args.steps);
  } else if (args.mode == "nonlinear") {
    for (const auto& state : rsid::evolve_nonlinear(snap.graph, idx, ind, snap.p, args.steps))
      us.push_back(rsid::passed_fraction(state));
  } else {
    throw CLI::ValidationError("--mode", "expected linear or nonlinear");
  }

  const rsid::NormKind kind = (args.norm == "l1") ? rsid::NormKind::l1 : rsid::NormKind::l2;
  const auto norms = rsid::trajectory_norms(us, kind);

  std::ofstream out(args.out);
  if (!out) throw rsid::DataError("cannot write trajectory file: " + args.out);
  out << "t,norm,label\n";
  for (std::size_t t = 0; t < norms.size(); ++t)
    out << t << ',' << rsid::format_double(norms[t]) << ',' << label << '\n';
  std::cout << "trajectory steps=" << (norms.size() - 1) << " label=" << label << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"rumor source identification on loopy networks"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "spread a rumor and write the snapshot");
  simulate->add_option("--graph", sim.graph_spec,
                       "sw:<n>,<k>,<beta> | lattice:<rows>,<cols> | [file:]<path>")
      ->required();
  simulate->add_option("--p", sim.p, "per-step infection probability")->required();
  simulate->add_option("--sources", sim.sources, "number of sources to sample")->required();
  simulate->add_option("--target", sim.target, "snapshot size")->required();
  simulate->add_option("--max-steps", sim.max_steps, "step cap");
  simulate->add_option("--seed", sim.seed, "rng seed");
  simulate->add_option("--out", sim.out, "snapshot output path")->required();

  IdentifyArgs ident;
  auto* identify = app.add_subcommand("identify", "identify sources from a snapshot");
  identify->add_option("--snapshot", ident.snapshot_path, "snapshot file")->required();
  identify->add_option("--method", ident.method, "msi | pmsi | jc | rc-bfs")->required();
  identify->add_option("--num-sources", ident.num_sources, "source count |S|");
  identify->add_option("--power-iters", ident.power_iters, "fixed power-iteration count");
  identify->add_flag("--converge", ident.converge, "iterate to residual convergence instead");
  identify->add_option("--threads", ident.threads, "worker threads (0 = auto)");
  identify->add_option("--top", ident.top, "ranked candidates to print");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "run a Monte-Carlo experiment");
  bench_cmd->add_option("--config", bench.config_path, "key=value experiment config")->required();
  bench_cmd->add_option("--out-dir", bench.out_dir, "report output directory")->required();

  TrajectoryArgs traj;
  auto* trajectory = app.add_subcommand("trajectory", "export message-passing norm trajectories");
  trajectory->add_option("--snapshot", traj.snapshot_path, "snapshot file")->required();
  trajectory->add_option("--indicator", traj.indicator, "true | random | node:<id>");
  trajectory->add_option("--mode", traj.mode, "linear | nonlinear")->required();
  trajectory->add_option("--steps", traj.steps, "horizon T")->required();
  trajectory->add_option("--norm", traj.norm, "l2 | l1");
  trajectory->add_option("--seed", traj.seed, "seed for the random indicator");
  trajectory->add_option("--out", traj.out, "csv output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (identify->parsed()) return run_identify(ident);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (trajectory->parsed()) return run_trajectory(traj);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const rsid::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const rsid::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
