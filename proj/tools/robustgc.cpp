// Command-line front end: graphs, spectra, solvers, experiments, and
// out-of-sample grids.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rgc/bench.hpp"
#include "rgc/classify.hpp"
#include "rgc/config.hpp"
#include "rgc/data.hpp"
#include "rgc/error.hpp"
#include "rgc/io.hpp"
#include "rgc/oos.hpp"
#include "rgc/spectral.hpp"

namespace fs = std::filesystem;
using namespace rgc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDomain = 3;
constexpr int kExitExperiment = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kGammaOutOfRange:
    case ErrorCode::kPTooLarge:
    case ErrorCode::kOutOfRange:
      return kExitDomain;
    case ErrorCode::kAllGridPointsFailed:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kDisconnectedAfterRetries:
      return kExitExperiment;
    default:
      return kExitValidation;
  }
}

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  bool quiet = false;
};

// Where human-readable summaries go: stdout when data goes to a file,
// stderr when data goes to stdout.
std::ostream& info_stream(const std::string& output) {
  return output.empty() ? std::cerr : std::cout;
}

template <typename Write>
void emit(const std::string& output, Write&& write) {
  if (output.empty()) {
    write(std::cout);
  } else {
    auto os = open_output(output);
    write(os);
  }
}

void write_manifest(const std::string& output, const KeyValueConfig& manifest) {
  if (output.empty()) return;
  auto os = open_output(output + ".manifest");
  manifest.write(os);
}

WeightedGraph load_graph(const std::string& path) {
  EdgeListFile file = read_edge_list(path);
  return WeightedGraph::from_edge_list(file.n, file.edges);
}

struct GraphArgs {
  std::string kind;
  std::string input;
  std::string output;
  int k = 20;
  double sigma = 1.25;
  bool largest = false;
};

int cmd_graph(const GraphArgs& a, const Globals& g) {
  KeyValueConfig manifest;
  manifest.set("generator", "graph " + a.kind);
  manifest.set("input", a.input);
  WeightedGraph graph = [&]() -> WeightedGraph {
    if (a.kind == "edges") {
      EdgeListFile file = read_edge_list(a.input);
      if (a.largest) {
        ComponentExtraction c = largest_component(file.n, file.edges);
        std::string ids;
        for (std::size_t i = 0; i < c.original_ids.size(); ++i) {
          ids += (i ? "," : "") + std::to_string(c.original_ids[i]);
        }
        manifest.set("largest_component", "true");
        manifest.set("original_ids", ids);
        return WeightedGraph::from_edge_list(c.n, c.edges);
      }
      return WeightedGraph::from_edge_list(file.n, file.edges);
    }
    PointFile points = read_points_csv(a.input);
    if (a.kind == "knn") {
      manifest.set("k", std::to_string(a.k));
      return knn_graph(points.points, a.k);
    }
    manifest.set("sigma", format_double(a.sigma));
    return kernel_graph(points.points, KernelSpec{a.sigma});
  }();
  manifest.set("nodes", std::to_string(graph.size()));
  manifest.set("edges", std::to_string(graph.edge_count()));
  emit(a.output, [&](std::ostream& os) { write_edge_list(os, graph); });
  write_manifest(a.output, manifest);
  if (!g.quiet) {
    info_stream(a.output) << "nodes " << graph.size() << ", edges " << graph.edge_count()
                          << "\n";
  }
  return kExitOk;
}

struct EigArgs {
  std::string graph;
  std::string output;
  Index p = 5;
};

int cmd_eig(const EigArgs& a, const Globals& g) {
  SpectralContext ctx(load_graph(a.graph));
  EigenPairs eig = smallest_eigenpairs(ctx, a.p);
  std::cout << "lambda1 " << format_double(ctx.lambda1()) << "\n";
  std::cout << "index,eigenvalue\n";
  for (Index l = 0; l < eig.count(); ++l) {
    std::cout << l << ',' << format_double(eig.values[l]) << "\n";
  }
  if (!a.output.empty()) {
    auto os = open_output(a.output);
    os << "node";
    for (Index l = 0; l < eig.count(); ++l) os << ",v" << l;
    os << "\n";
    for (Index i = 0; i < eig.vectors.rows(); ++i) {
      os << i;
      for (Index l = 0; l < eig.count(); ++l) os << ',' << format_double(eig.vectors(i, l));
      os << "\n";
    }
  }
  (void)g;
  return kExitOk;
}

struct SolveArgs {
  std::string method;
  std::string graph;
  std::string labels;
  std::string output;
  std::optional<double> gamma;
  double eta = 0.9;
  Index p = 0;
  bool skip_null = false;
};

int cmd_solve(const SolveArgs& a, const Globals& g) {
  SpectralContext ctx(load_graph(a.graph));
  const LabelVector labels = LabelVector::from_pairs(ctx.size(), read_label_pairs(a.labels));
  const Method method = method_from_string(a.method);
  ClassifierSolution sol;
  const auto need_gamma = [&] {
    if (!a.gamma) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(to_string(method)) + " needs --gamma");
    }
    return *a.gamma;
  };
  switch (method) {
    case Method::kRobust:
      sol = solve_robust_gc(ctx, labels, need_gamma());
      break;
    case Method::kPfRobust:
      sol = solve_pf_robust_gc(ctx, labels, a.eta);
      break;
    case Method::kZhou:
      sol = solve_zhou_gc(ctx, labels, need_gamma());
      break;
    case Method::kBelkin: {
      if (a.p < 1) throw Error(ErrorCode::kInvalidArgument, "belkin needs --p >= 1");
      const BelkinBasis basis =
          a.skip_null ? BelkinBasis::kSkipNullVector : BelkinBasis::kFromNullVector;
      const Index count = a.p + (a.skip_null ? 1 : 0);
      if (count > ctx.size()) {
        throw Error(ErrorCode::kPTooLarge, "p exceeds the number of eigenvectors");
      }
      sol = solve_belk_gc(ctx, labels, a.p, smallest_eigenpairs(ctx, count), basis);
      break;
    }
  }
  emit(a.output, [&](std::ostream& os) { write_scores_csv(os, sol); });
  if (!g.quiet) {
    std::ostream& info = info_stream(a.output);
    info << "method " << to_string(method) << "\n";
    info << "lambda1 " << format_double(ctx.lambda1()) << "\n";
    info << "param " << format_double(sol.param) << "\n";
    info << "residual " << format_double(sol.residual) << "\n";
    info << "iterations " << sol.iterations << "\n";
    if (method == Method::kRobust || method == Method::kPfRobust) {
      info << "condition_bound "
           << format_double(condition_number_bound(ctx, sol.param, weights_psd(ctx.graph())))
           << "\n";
    }
    for (const auto& w : sol.warnings) std::cerr << "warning: " << w << "\n";
  }
  return kExitOk;
}

struct BenchArgs {
  std::string kind;
  std::string config;
  std::string out_dir;
};

int cmd_bench(const BenchArgs& a, const Globals& g) {
  KeyValueConfig config = KeyValueConfig::load(a.config);
  const fs::path base = fs::path(a.config).parent_path();
  ExperimentRun run = a.kind == "noise" ? run_noise_experiment(config, base, g.threads)
                                        : run_accuracy_experiment(config, base, g.threads);
  const fs::path out = a.out_dir.empty()
                           ? fs::path(config.get_or("output_dir", "results")) /
                                 fs::path(a.config).stem()
                           : fs::path(a.out_dir);
  write_experiment(out, run);
  if (!g.quiet) {
    for (const auto& w : run.result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "rows " << run.result.rows.size() << "\n";
    std::cout << "wrote " << (out / "results.csv").string() << ", "
              << (out / "aggregate.csv").string() << ", "
              << (out / "config.resolved").string() << "\n";
  }
  return kExitOk;
}

struct OosArgs {
  double sigma = 0.6;
  int grid = 100;
  Index n_per_class = 50;
  Index labels_per_class = 5;
  double noise = 0.1;
  double eta = 0.9;
  bool self_inclusive = false;
  std::vector<double> window{-3.1, 3.1, -3.1, 3.1};
  std::string output;
};

int cmd_oos(const OosArgs& a, const Globals& g) {
  if (a.labels_per_class < 1 || a.labels_per_class > a.n_per_class) {
    throw Error(ErrorCode::kInvalidArgument, "--labels-per-class must lie in [1, n-per-class]");
  }
  PointsWithTruth moons = moons_generate(a.n_per_class, a.noise, g.seed);
  const LabelVector labels =
      sample_labels_per_class(moons.truth, a.labels_per_class, g.seed);
  const DegreeConvention conv =
      a.self_inclusive ? DegreeConvention::kSelfInclusive : DegreeConvention::kLiteral;
  OosModel model = OosModel::train(moons.points, KernelSpec{a.sigma}, labels, a.eta, conv);
  if (a.window.size() != 4) {
    throw Error(ErrorCode::kInvalidArgument, "--window needs x0min x0max x1min x1max");
  }
  const GridWindow window{a.window[0], a.window[1], a.window[2], a.window[3]};
  const auto cells = evaluate_grid(model, window, a.grid, g.threads);
  emit(a.output, [&](std::ostream& os) { write_grid_csv(os, cells); });
  if (!a.output.empty()) {
    KeyValueConfig manifest;
    manifest.set("generator", "moons");
    manifest.set("n_per_class", std::to_string(a.n_per_class));
    manifest.set("noise_std", format_double(a.noise));
    manifest.set("seed", std::to_string(g.seed));
    manifest.set("sigma", format_double(a.sigma));
    manifest.set("eta", format_double(a.eta));
    manifest.set("gamma", format_double(model.gamma()));
    manifest.set("grid", std::to_string(a.grid));
    manifest.set("convention", a.self_inclusive ? "self_inclusive" : "literal");
    write_manifest(a.output, manifest);
  }
  if (!g.quiet) {
    std::size_t feasible = 0;
    for (const auto& c : cells) feasible += c.label != 0;
    info_stream(a.output) << "gamma " << format_double(model.gamma()) << "\n"
                          << "feasible " << feasible << " of " << cells.size() << "\n";
  }
  return kExitOk;
}

struct GenerateArgs {
  std::string kind;
  std::string output;  // prefix
  std::vector<Index> sizes{100, 100};
  double intra = 0.7;
  double inter = 0.3;
  std::vector<int> class_map;
  Index n_per_side = 10;
  double weak = 0.1;
  Index n_per_class = 50;
  double noise = 0.1;
};

int cmd_generate(const GenerateArgs& a, const Globals& g) {
  if (a.output.empty()) throw Error(ErrorCode::kInvalidArgument, "generate needs -o PREFIX");
  KeyValueConfig manifest;
  manifest.set("generator", a.kind);
  manifest.set("seed", std::to_string(g.seed));
  const auto write_graph = [&](const WeightedGraph& graph, const std::vector<int>& truth) {
    {
      auto os = open_output(a.output + ".tsv");
      write_edge_list(os, graph);
    }
    auto os = open_output(a.output + ".truth.csv");
    write_label_pairs(os, truth);
    manifest.set("edges_file", a.output + ".tsv");
    manifest.set("truth_file", a.output + ".truth.csv");
    manifest.set("nodes", std::to_string(graph.size()));
    manifest.set("edges", std::to_string(graph.edge_count()));
  };
  if (a.kind == "sbm") {
    SbmSpec spec;
    spec.block_sizes = a.sizes;
    const auto b = static_cast<Index>(a.sizes.size());
    spec.connectivity = Matrix::Constant(b, b, a.inter);
    spec.connectivity.diagonal().setConstant(a.intra);
    spec.seed = g.seed;
    SbmSample s = sbm_generate(spec, a.class_map);
    std::string sizes;
    for (Index v : a.sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(v);
    manifest.set("block_sizes", sizes);
    manifest.set("intra", format_double(a.intra));
    manifest.set("inter", format_double(a.inter));
    manifest.set("seed_used", std::to_string(s.seed_used));
    write_graph(s.graph, s.truth);
  } else if (a.kind == "chain") {
    GraphWithTruth c = chain_graph(a.n_per_side, a.weak);
    manifest.set("n_per_side", std::to_string(a.n_per_side));
    manifest.set("weak", format_double(a.weak));
    write_graph(c.graph, c.truth);
  } else if (a.kind == "karate") {
    GraphWithTruth k = karate_club();
    write_graph(k.graph, k.truth);
  } else {
    PointsWithTruth m = moons_generate(a.n_per_class, a.noise, g.seed);
    auto os = open_output(a.output + ".csv");
    write_points_csv(os, m.points, &m.truth);
    manifest.set("points_file", a.output + ".csv");
    manifest.set("n_per_class", std::to_string(a.n_per_class));
    manifest.set("noise_std", format_double(a.noise));
  }
  auto os = open_output(a.output + ".manifest");
  manifest.write(os);
  if (!g.quiet) std::cout << "wrote " << a.output << ".*\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust graph classification toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_flag("--quiet", globals.quiet, "Suppress summaries");

  GraphArgs graph_args;
  auto* graph = app.add_subcommand("graph", "Build a graph and write its edge list");
  graph->add_option("kind", graph_args.kind, "knn | kernel | edges")
      ->required()
      ->check(CLI::IsMember({"knn", "kernel", "edges"}));
  graph->add_option("input", graph_args.input, "Points CSV or edge list")->required();
  graph->add_option("-o,--output", graph_args.output, "Edge-list output (default stdout)");
  graph->add_option("--k", graph_args.k, "Neighbours for knn")->check(CLI::PositiveNumber);
  graph->add_option("--sigma", graph_args.sigma, "Gaussian kernel bandwidth")
      ->check(CLI::PositiveNumber);
  graph->add_flag("--largest-component", graph_args.largest,
                  "Keep only the largest connected component (edges)");

  EigArgs eig_args;
  auto* eig = app.add_subcommand("eig", "Smallest normalized-Laplacian eigenpairs");
  eig->add_option("--graph", eig_args.graph, "Edge list")->required();
  eig->add_option("--p", eig_args.p, "Number of eigenpairs")->check(CLI::PositiveNumber);
  eig->add_option("-o,--output", eig_args.output, "Eigenvector CSV");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Train a classifier and write scores");
  solve->add_option("method", solve_args.method, "robust | pf | zhou | belkin")
      ->required()
      ->check(CLI::IsMember({"robust", "pf", "pf_robust", "zhou", "belkin"}));
  solve->add_option("--graph", solve_args.graph, "Edge list")->required();
  solve->add_option("--labels", solve_args.labels, "node,label CSV")->required();
  solve->add_option("--gamma", solve_args.gamma, "Regularization (robust, zhou)");
  solve->add_option("--eta", solve_args.eta, "gamma = eta * lambda1 (pf)");
  solve->add_option("--p", solve_args.p, "Eigenvectors (belkin)");
  solve->add_flag("--skip-null", solve_args.skip_null, "Belkin basis v1..vp");
  solve->add_option("-o,--output", solve_args.output, "Scores CSV (default stdout)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run an experiment from a config file");
  bench->add_option("kind", bench_args.kind, "noise | accuracy")
      ->required()
      ->check(CLI::IsMember({"noise", "accuracy"}));
  bench->add_option("--config", bench_args.config, "key = value config")->required();
  bench->add_option("--out", bench_args.out_dir, "Output directory");

  OosArgs oos_args;
  auto* oos = app.add_subcommand("oos", "Out-of-sample grid on a moons sample");
  oos->add_option("--sigma", oos_args.sigma, "Kernel bandwidth")->check(CLI::PositiveNumber);
  oos->add_option("--grid", oos_args.grid, "Grid resolution per axis")
      ->check(CLI::PositiveNumber);
  oos->add_option("--n-per-class", oos_args.n_per_class)->check(CLI::PositiveNumber);
  oos->add_option("--labels-per-class", oos_args.labels_per_class)
      ->check(CLI::PositiveNumber);
  oos->add_option("--noise", oos_args.noise, "Moons noise std");
  oos->add_option("--eta", oos_args.eta, "gamma = eta * lambda1");
  oos->add_flag("--self-inclusive", oos_args.self_inclusive,
                "Count k(x, x) in the degree of unseen points");
  oos->add_option("--window", oos_args.window, "x0min x0max x1min x1max")->expected(4);
  oos->add_option("-o,--output", oos_args.output, "Grid CSV (default stdout)");

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "Write a synthetic or bundled dataset");
  gen->add_option("kind", gen_args.kind, "sbm | moons | chain | karate")
      ->required()
      ->check(CLI::IsMember({"sbm", "moons", "chain", "karate"}));
  gen->add_option("-o,--output", gen_args.output, "Output path prefix")->required();
  gen->add_option("--sizes", gen_args.sizes, "SBM block sizes")->delimiter(',');
  gen->add_option("--intra", gen_args.intra, "SBM within-block probability");
  gen->add_option("--inter", gen_args.inter, "SBM between-block probability");
  gen->add_option("--class-map", gen_args.class_map, "Class per block")->delimiter(',');
  gen->add_option("--n-per-side", gen_args.n_per_side)->check(CLI::PositiveNumber);
  gen->add_option("--weak", gen_args.weak, "Chain middle edge weight");
  gen->add_option("--n-per-class", gen_args.n_per_class)->check(CLI::PositiveNumber);
  gen->add_option("--noise", gen_args.noise, "Moons noise std");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*graph) return cmd_graph(graph_args, globals);
    if (*eig) return cmd_eig(eig_args, globals);
    if (*solve) return cmd_solve(solve_args, globals);
    if (*bench) return cmd_bench(bench_args, globals);
    if (*oos) return cmd_oos(oos_args, globals);
    if (*gen) return cmd_generate(gen_args, globals);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
