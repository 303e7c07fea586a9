#include "rgc/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "rgc/data.hpp"
#include "rgc/error.hpp"
#include "rgc/io.hpp"
#include "rgc/rng.hpp"

namespace rgc {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string join_ints(const std::vector<Index>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

const char* to_string(BelkinBasis basis) {
  return basis == BelkinBasis::kFromNullVector ? "from_null" : "skip_null";
}

BelkinBasis belkin_basis_from_string(const std::string& s) {
  if (s == "from_null") return BelkinBasis::kFromNullVector;
  if (s == "skip_null") return BelkinBasis::kSkipNullVector;
  throw Error(ErrorCode::kInvalidArgument,
              "belkin_basis must be from_null or skip_null, got '" + s + "'");
}

std::vector<Index> to_index(const std::vector<std::int64_t>& v) {
  return {v.begin(), v.end()};
}

// Scores for every parameter at once from the eigen-expansion of y:
// column j holds f for params[j].
Matrix spectral_sweep(const EigenPairs& eig, const Vector& y, Method method,
                      std::span<const double> params) {
  const Vector c = eig.vectors.transpose() * y;
  const Index n = eig.count();
  Matrix coeff(n, static_cast<Index>(params.size()));
  for (Index j = 0; j < coeff.cols(); ++j) {
    const double g = params[static_cast<std::size_t>(j)];
    for (Index l = 0; l < n; ++l) {
      const double lam = eig.values[l];
      if (method == Method::kZhou) {
        coeff(l, j) = g * c[l] / (lam + g);
      } else {
        coeff(l, j) = l == 0 ? 0.0 : c[l] / (lam / g - 1.0);
      }
    }
  }
  return eig.vectors * coeff;
}

template <typename Scores>
double accuracy_on(const Scores& f, std::span<const int> truth,
                   const std::vector<Index>& unlabelled) {
  Index hits = 0;
  for (Index i : unlabelled) {
    const int predicted = f[i] >= 0.0 ? 1 : -1;
    hits += predicted == truth[static_cast<std::size_t>(i)];
  }
  return static_cast<double>(hits) / static_cast<double>(unlabelled.size());
}

std::vector<Index> unlabelled_nodes(const LabelVector& labels) {
  std::vector<Index> out;
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) out.push_back(i);
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyEvaluationSet,
                "every node is labelled; nothing to evaluate");
  }
  return out;
}

void check_truth(std::span<const int> truth, Index n) {
  if (static_cast<Index>(truth.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "truth length differs from graph size");
  }
  for (int t : truth) {
    if (t != 1 && t != -1) {
      throw Error(ErrorCode::kInvalidArgument, "truth labels must be +1 or -1");
    }
  }
}

}  // namespace

std::vector<double> zhou_grid(int points, double lo, double hi) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid log grid");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    grid[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * t);
  }
  return grid;
}

std::vector<double> belkin_grid(Index n, Index max_p) {
  std::vector<double> grid;
  for (Index p = 1; p <= std::min(n, max_p); ++p) grid.push_back(static_cast<double>(p));
  return grid;
}

std::vector<double> robust_grid(double lambda1, int points, double extra) {
  if (!(lambda1 > 0.0) || points < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid robust grid");
  }
  std::vector<double> grid;
  for (int k = 1; k <= points; ++k) grid.push_back(lambda1 * k / (points + 1));
  if (extra > 0.0 && std::find(grid.begin(), grid.end(), extra) == grid.end()) {
    grid.insert(std::upper_bound(grid.begin(), grid.end(), extra), extra);
  }
  return grid;
}

bool Dataset::complete_basis() const {
  return eigenpairs && eigenpairs->count() == size();
}

Dataset make_dataset(std::string name, WeightedGraph graph,
                     std::vector<int> truth, Index belkin_max,
                     Index dense_threshold) {
  check_truth(truth, graph.size());
  Dataset d;
  d.name = std::move(name);
  d.context = std::make_shared<const SpectralContext>(std::move(graph));
  d.truth = std::move(truth);
  const Index n = d.context->size();
  EigenOptions eopts;
  eopts.dense_threshold = dense_threshold;
  const Index p = n <= dense_threshold ? n : std::min(n, belkin_max + 1);
  d.eigenpairs =
      std::make_shared<const EigenPairs>(smallest_eigenpairs(*d.context, p, eopts));
  return d;
}

Dataset load_dataset(const KeyValueConfig& config, const std::string& name,
                     const std::filesystem::path& base_dir,
                     KeyValueConfig* resolved) {
  const auto key = [&](const char* field) { return name + "." + field; };
  const auto record = [&](const char* field, const std::string& value) {
    if (resolved) resolved->set(key(field), value);
  };
  const auto resolve_path = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  const std::string type = config.get_or(key("type"), name == "karate" ? "karate" : "");
  record("type", type);
  const Index belkin_max = config.get_int("belkin_max", 51);

  if (type == "karate") {
    auto g = karate_club();
    return make_dataset(name, std::move(g.graph), std::move(g.truth), belkin_max);
  }
  if (type == "chain") {
    const Index half = config.get_int(key("n_per_side"), 10);
    const double weak = config.get_double(key("weak"), 0.1);
    record("n_per_side", std::to_string(half));
    record("weak", format_double(weak));
    auto g = chain_graph(half, weak);
    return make_dataset(name, std::move(g.graph), std::move(g.truth), belkin_max);
  }
  if (type == "sbm") {
    SbmSpec spec;
    spec.block_sizes = to_index(config.get_ints(key("block_sizes"), {100, 100}));
    const auto b = static_cast<Index>(spec.block_sizes.size());
    if (config.has(key("connectivity"))) {
      const auto flat = config.get_doubles(key("connectivity"), {});
      if (static_cast<Index>(flat.size()) != b * b) {
        throw Error(ErrorCode::kDimensionMismatch,
                    key("connectivity") + " needs blocks^2 entries");
      }
      spec.connectivity = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                         Eigen::Dynamic, Eigen::RowMajor>>(
          flat.data(), b, b);
    } else {
      const double intra = config.get_double(key("intra"), 0.7);
      const double inter = config.get_double(key("inter"), 0.3);
      spec.connectivity = Matrix::Constant(b, b, inter);
      spec.connectivity.diagonal().setConstant(intra);
    }
    spec.seed = static_cast<std::uint64_t>(
        config.get_int(key("seed"), config.get_int("seed", 0)));
    std::vector<int> class_map;
    for (auto c : config.get_ints(key("class_map"), {})) class_map.push_back(static_cast<int>(c));
    SbmSample s = sbm_generate(spec, class_map);

    record("block_sizes", join_ints(spec.block_sizes));
    std::vector<double> flat;
    for (Index i = 0; i < b; ++i) {
      for (Index j = 0; j < b; ++j) flat.push_back(spec.connectivity(i, j));
    }
    record("connectivity", join_doubles(flat));
    if (class_map.empty()) {
      class_map.assign(static_cast<std::size_t>(b), -1);
      class_map[0] = 1;
    }
    record("class_map", join_ints({class_map.begin(), class_map.end()}));
    record("seed", std::to_string(spec.seed));
    record("seed_used", std::to_string(s.seed_used));
    return make_dataset(name, std::move(s.graph), std::move(s.truth), belkin_max);
  }
  if (type == "edges") {
    const auto edges_path = resolve_path(config.get(key("edges")));
    const auto truth_path = resolve_path(config.get(key("truth")));
    record("edges", edges_path.string());
    record("truth", truth_path.string());
    EdgeListFile file = read_edge_list(edges_path);
    std::vector<int> truth(static_cast<std::size_t>(file.n), 0);
    for (const auto& [node, label] : read_label_pairs(truth_path)) {
      if (node < 0 || node >= file.n) {
        throw Error(ErrorCode::kInvalidArgument, "truth node index out of range");
      }
      truth[static_cast<std::size_t>(node)] = label;
    }
    return make_dataset(name, WeightedGraph::from_edge_list(file.n, file.edges),
                        std::move(truth), belkin_max);
  }
  if (type == "points") {
    const auto path = resolve_path(config.get(key("points")));
    record("points", path.string());
    PointFile file = read_points_csv(path);
    if (!file.labels) {
      throw Error(ErrorCode::kInvalidArgument, path.string() + " has no label column");
    }
    const std::string kind = config.get_or(key("graph"), "kernel");
    record("graph", kind);
    WeightedGraph g = [&] {
      if (kind == "knn") {
        const int k = static_cast<int>(config.get_int(key("k"), 20));
        record("k", std::to_string(k));
        return knn_graph(file.points, k);
      }
      if (kind != "kernel") {
        throw Error(ErrorCode::kInvalidArgument, key("graph") + " must be kernel or knn");
      }
      const double sigma = config.get_double(key("sigma"), 1.25);
      record("sigma", format_double(sigma));
      return kernel_graph(file.points, KernelSpec{sigma});
    }();
    return make_dataset(name, std::move(g), std::move(*file.labels), belkin_max);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "dataset '" + name + "' has unknown type '" + type + "'");
}

double accuracy(const Vector& scores, std::span<const int> truth,
                const LabelVector& labels) {
  if (scores.size() != labels.size() ||
      static_cast<Index>(truth.size()) != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scores, truth and labels differ in size");
  }
  return accuracy_on(scores, truth, unlabelled_nodes(labels));
}

ValidationOutcome perfect_validation(const Dataset& data,
                                     const LabelVector& labels, Method method,
                                     std::span<const double> grid,
                                     BelkinBasis belkin_basis) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty validation grid");
  if (labels.size() != data.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "labels differ from graph size");
  }
  const std::vector<Index> unlabelled = unlabelled_nodes(labels);
  const SpectralContext& ctx = *data.context;

  ValidationOutcome out;
  out.accuracies.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  const auto fail = [&](std::size_t k, const std::exception& e) {
    std::ostringstream os;
    os << to_string(method) << " param " << format_double(grid[k])
       << " skipped: " << e.what();
    out.warnings.push_back(os.str());
  };

  const bool closed_form = (method == Method::kRobust || method == Method::kPfRobust ||
                            method == Method::kZhou) &&
                           data.complete_basis();
  if (closed_form) {
    std::vector<char> usable(grid.size(), 1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      try {
        if (method != Method::kZhou) {
          check_robust_gamma(ctx, grid[k]);
        } else if (!(grid[k] > 0.0) || !std::isfinite(grid[k])) {
          throw Error(ErrorCode::kGammaOutOfRange,
                      "zhou gamma must be positive and finite, got " + format_double(grid[k]));
        }
      } catch (const Error& e) {
        usable[k] = 0;
        fail(k, e);
      }
    }
    const Matrix f = spectral_sweep(*data.eigenpairs, labels.values(),
                                    method == Method::kZhou ? Method::kZhou : Method::kRobust,
                                    grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (usable[k]) {
        out.accuracies[k] = accuracy_on(f.col(static_cast<Index>(k)), data.truth, unlabelled);
      }
    }
  } else {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      try {
        ClassifierSolution sol;
        switch (method) {
          case Method::kRobust:
          case Method::kPfRobust:
            sol = solve_robust_gc(ctx, labels, grid[k]);
            break;
          case Method::kZhou:
            sol = solve_zhou_gc(ctx, labels, grid[k]);
            break;
          case Method::kBelkin:
            if (!data.eigenpairs) {
              throw Error(ErrorCode::kIncompleteBasis, "dataset has no eigenpairs");
            }
            if (!(grid[k] >= 1.0) || grid[k] != std::floor(grid[k])) {
              throw Error(ErrorCode::kInvalidArgument,
                          "belkin p must be a positive integer, got " + format_double(grid[k]));
            }
            sol = solve_belk_gc(ctx, labels, static_cast<Index>(grid[k]),
                                *data.eigenpairs, belkin_basis);
            break;
        }
        out.accuracies[k] = accuracy_on(sol.f_star, data.truth, unlabelled);
      } catch (const Error& e) {
        fail(k, e);
      }
    }
  }

  bool any = false;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double a = out.accuracies[k];
    if (std::isnan(a)) continue;
    if (!any || a > out.accuracy) {
      out.accuracy = a;
      out.param = grid[k];
    } else if (a == out.accuracy && grid[k] < out.param) {
      out.param = grid[k];
    }
    any = true;
  }
  if (!any) {
    std::ostringstream os;
    os << "all " << grid.size() << " grid points failed for " << to_string(method);
    if (!out.warnings.empty()) os << " (first: " << out.warnings.front() << ")";
    throw Error(ErrorCode::kAllGridPointsFailed, os.str());
  }
  return out;
}

std::vector<Index> label_sizes(const ExperimentOptions& options, Index n) {
  std::vector<Index> sizes;
  const auto add = [&](Index s) {
    if (std::find(sizes.begin(), sizes.end(), s) == sizes.end()) sizes.push_back(s);
  };
  if (!options.label_counts.empty()) {
    for (Index s : options.label_counts) add(s);
  } else {
    for (double f : options.label_fractions) {
      if (!(f > 0.0 && f <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "label fractions must lie in (0, 1]");
      }
      add(std::max<Index>(2, static_cast<Index>(std::llround(f * static_cast<double>(n)))));
    }
  }
  return sizes;
}

std::vector<AggregateRow> ExperimentResult::aggregate() const {
  std::vector<AggregateRow> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    const ResultRow& r = rows[i];
    while (j < rows.size() && rows[j].dataset == r.dataset && rows[j].method == r.method &&
           rows[j].n_labels == r.n_labels && rows[j].noise == r.noise) {
      ++j;
    }
    AggregateRow a{r.dataset, r.method, r.n_labels, r.noise};
    const double m = static_cast<double>(j - i);
    a.min = a.max = r.accuracy;
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      sum += rows[k].accuracy;
      a.min = std::min(a.min, rows[k].accuracy);
      a.max = std::max(a.max, rows[k].accuracy);
    }
    a.mean = sum / m;
    if (j - i > 1) {
      double ss = 0.0;
      for (std::size_t k = i; k < j; ++k) {
        ss += (rows[k].accuracy - a.mean) * (rows[k].accuracy - a.mean);
      }
      a.std = std::sqrt(ss / (m - 1.0));
    }
    out.push_back(a);
    i = j;
  }
  return out;
}

ExperimentResult run_experiment(const std::vector<Dataset>& datasets,
                                const ExperimentOptions& options, int threads) {
  if (options.repetitions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "repetitions must be >= 1");
  }
  if (options.methods.empty()) throw Error(ErrorCode::kInvalidArgument, "no methods");
  if (!(options.pf_eta > 0.0 && options.pf_eta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pf_eta must lie in (0, 1)");
  }
  for (double noise : options.noise_levels) {
    if (!(noise >= 0.0 && noise < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "noise levels must lie in [0, 1)");
    }
  }

  struct Task {
    std::size_t dataset;
    std::size_t size_index;
    Index n_labels;
    std::size_t noise_index;
    int rep;
  };
  struct Grids {
    std::vector<double> zhou, belkin, robust;
    double pf_gamma;
  };
  std::vector<Task> tasks;
  std::vector<Grids> grids;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const Dataset& ds = datasets[d];
    const Index n = ds.size();
    const double pf_gamma = options.pf_eta * ds.context->lambda1();
    Index available = ds.eigenpairs ? ds.eigenpairs->count() : 0;
    if (options.belkin_basis == BelkinBasis::kSkipNullVector) available -= 1;
    Grids grid{zhou_grid(options.grid_points, options.zhou_min, options.zhou_max),
               belkin_grid(std::min(n, available), options.belkin_max),
               robust_grid(ds.context->lambda1(), options.grid_points, pf_gamma), pf_gamma};
    if (!options.zhou_values.empty()) grid.zhou = options.zhou_values;
    if (!options.belkin_values.empty()) grid.belkin = options.belkin_values;
    if (!options.robust_fractions.empty()) {
      grid.robust.clear();
      for (double t : options.robust_fractions) grid.robust.push_back(t * ds.context->lambda1());
      std::sort(grid.robust.begin(), grid.robust.end());
      if (std::find(grid.robust.begin(), grid.robust.end(), pf_gamma) == grid.robust.end()) {
        grid.robust.insert(std::upper_bound(grid.robust.begin(), grid.robust.end(), pf_gamma),
                           pf_gamma);
      }
    }
    grids.push_back(std::move(grid));
    const auto sizes = label_sizes(options, n);
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      if (sizes[s] > n) {
        std::ostringstream os;
        os << "cannot label " << sizes[s] << " of " << n << " nodes in " << ds.name;
        throw Error(ErrorCode::kCountTooLarge, os.str());
      }
      for (std::size_t z = 0; z < options.noise_levels.size(); ++z) {
        for (int rep = 0; rep < options.repetitions; ++rep) {
          tasks.push_back({d, s, sizes[s], z, rep});
        }
      }
    }
  }

  struct TaskOutput {
    std::vector<ResultRow> rows;
    std::vector<std::string> warnings;
    std::exception_ptr error;
  };
  std::vector<TaskOutput> outputs(tasks.size());

  const auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    const Dataset& ds = datasets[task.dataset];
    const Grids& g = grids[task.dataset];
    const double noise = options.noise_levels[task.noise_index];
    const std::uint64_t base = hash_key(options.seed, RngTag::kExperiment, fnv1a(ds.name), 0);
    const auto key_n = static_cast<std::uint64_t>(task.n_labels);
    const auto key_r = static_cast<std::uint64_t>(task.rep);
    const LabelVector clean =
        sample_labels(ds.truth, task.n_labels, hash_key(base, RngTag::kLabelSample, key_n, key_r));
    const LabelVector labels =
        flip_labels(clean, noise, hash_key(base, RngTag::kLabelFlip, key_n, key_r));

    TaskOutput& out = outputs[t];
    std::optional<ValidationOutcome> robust;
    for (Method m : options.methods) {
      ResultRow row{ds.name, m, task.n_labels, noise, task.rep};
      std::vector<std::string> warnings;
      if (m == Method::kRobust || m == Method::kPfRobust) {
        if (!robust) robust = perfect_validation(ds, labels, Method::kRobust, g.robust);
        if (m == Method::kRobust) {
          row.accuracy = robust->accuracy;
          row.param = robust->param;
        } else {
          const auto at = std::find(g.robust.begin(), g.robust.end(), g.pf_gamma) - g.robust.begin();
          row.accuracy = robust->accuracies[static_cast<std::size_t>(at)];
          row.param = g.pf_gamma;
          if (std::isnan(row.accuracy)) {
            throw Error(ErrorCode::kAllGridPointsFailed, "pf_robust solve failed");
          }
        }
        if (m == Method::kRobust) warnings = robust->warnings;
      } else {
        const auto& grid = m == Method::kZhou ? g.zhou : g.belkin;
        ValidationOutcome v = perfect_validation(ds, labels, m, grid, options.belkin_basis);
        row.accuracy = v.accuracy;
        row.param = v.param;
        warnings = std::move(v.warnings);
      }
      for (auto& w : warnings) {
        std::ostringstream os;
        os << ds.name << " labels=" << task.n_labels << " noise=" << format_double(noise)
           << " rep=" << task.rep << ": " << w;
        out.warnings.push_back(os.str());
      }
      out.rows.push_back(std::move(row));
    }
  };

  const unsigned workers = threads <= 0 ? std::max(1u, std::thread::hardware_concurrency())
                                        : static_cast<unsigned>(threads);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        run_task(t);
      } catch (...) {
        outputs[t].error = std::current_exception();
      }
    }
  };
  if (workers == 1 || tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, tasks.size()); ++w) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& o : outputs) {
    if (o.error) std::rethrow_exception(o.error);
  }

  // Order: dataset, method, label size, noise, repetition.
  struct Keyed {
    std::array<std::size_t, 5> key;
    const ResultRow* row;
  };
  std::vector<Keyed> keyed;
  ExperimentResult result;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const Task& task = tasks[t];
    for (std::size_t m = 0; m < outputs[t].rows.size(); ++m) {
      keyed.push_back({{task.dataset, m, task.size_index, task.noise_index,
                        static_cast<std::size_t>(task.rep)},
                       &outputs[t].rows[m]});
    }
    for (auto& w : outputs[t].warnings) result.warnings.push_back(std::move(w));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  result.rows.reserve(keyed.size());
  for (const auto& k : keyed) result.rows.push_back(*k.row);
  return result;
}

namespace {

ExperimentOptions parse_options(const KeyValueConfig& config, ExperimentOptions opts,
                                KeyValueConfig& resolved) {
  opts.seed = static_cast<std::uint64_t>(config.get_int("seed", static_cast<std::int64_t>(opts.seed)));
  opts.repetitions = static_cast<int>(config.get_int("repetitions", opts.repetitions));
  if (config.has("label_counts")) {
    opts.label_counts = to_index(config.get_ints("label_counts", {}));
    opts.label_fractions.clear();
  } else if (config.has("label_fractions")) {
    opts.label_fractions = config.get_doubles("label_fractions", {});
    opts.label_counts.clear();
  }
  opts.noise_levels = config.get_doubles("noise_levels", opts.noise_levels);
  if (config.has("methods")) {
    opts.methods.clear();
    for (const auto& m : config.get_strings("methods", {})) {
      opts.methods.push_back(method_from_string(m));
    }
  }
  opts.pf_eta = config.get_double("pf_eta", opts.pf_eta);
  opts.grid_points = static_cast<int>(config.get_int("grid_points", opts.grid_points));
  opts.zhou_min = config.get_double("zhou_min", opts.zhou_min);
  opts.zhou_max = config.get_double("zhou_max", opts.zhou_max);
  opts.belkin_max = config.get_int("belkin_max", opts.belkin_max);
  opts.zhou_values = config.get_doubles("zhou_grid", opts.zhou_values);
  opts.belkin_values = config.get_doubles("belkin_grid", opts.belkin_values);
  opts.robust_fractions = config.get_doubles("robust_grid_fractions", opts.robust_fractions);
  opts.belkin_basis = belkin_basis_from_string(
      config.get_or("belkin_basis", to_string(opts.belkin_basis)));

  resolved.set("seed", std::to_string(opts.seed));
  resolved.set("repetitions", std::to_string(opts.repetitions));
  if (!opts.label_counts.empty()) {
    resolved.set("label_counts", join_ints(opts.label_counts));
  } else {
    resolved.set("label_fractions", join_doubles(opts.label_fractions));
  }
  resolved.set("noise_levels", join_doubles(opts.noise_levels));
  std::string methods;
  for (Method m : opts.methods) {
    if (!methods.empty()) methods += ",";
    methods += to_string(m);
  }
  resolved.set("methods", methods);
  resolved.set("pf_eta", format_double(opts.pf_eta));
  resolved.set("grid_points", std::to_string(opts.grid_points));
  resolved.set("zhou_min", format_double(opts.zhou_min));
  resolved.set("zhou_max", format_double(opts.zhou_max));
  resolved.set("belkin_max", std::to_string(opts.belkin_max));
  if (!opts.zhou_values.empty()) resolved.set("zhou_grid", join_doubles(opts.zhou_values));
  if (!opts.belkin_values.empty()) resolved.set("belkin_grid", join_doubles(opts.belkin_values));
  if (!opts.robust_fractions.empty()) {
    resolved.set("robust_grid_fractions", join_doubles(opts.robust_fractions));
  }
  resolved.set("belkin_basis", to_string(opts.belkin_basis));
  return opts;
}

ExperimentRun run_configured(const char* kind, const KeyValueConfig& config,
                             const std::filesystem::path& base_dir, int threads,
                             const ExperimentOptions& defaults,
                             const std::vector<std::string>& default_datasets,
                             const KeyValueConfig& dataset_defaults) {
  ExperimentRun run;
  run.resolved.set("experiment", kind);
  const ExperimentOptions opts = parse_options(config, defaults, run.resolved);

  KeyValueConfig merged = dataset_defaults;
  for (const auto& [k, v] : config.entries()) merged.set(k, v);
  const auto names = config.get_strings("datasets", default_datasets);
  if (names.empty()) throw Error(ErrorCode::kInvalidArgument, "no datasets configured");
  std::string joined;
  for (const auto& n : names) joined += (joined.empty() ? "" : ",") + n;
  run.resolved.set("datasets", joined);

  std::vector<Dataset> datasets;
  for (const auto& name : names) {
    datasets.push_back(load_dataset(merged, name, base_dir, &run.resolved));
    run.resolved.set(name + ".nodes", std::to_string(datasets.back().size()));
    run.resolved.set(name + ".lambda1", format_double(datasets.back().context->lambda1()));
  }
  run.result = run_experiment(datasets, opts, threads);
  return run;
}

}  // namespace

ExperimentRun run_noise_experiment(const KeyValueConfig& config,
                                   const std::filesystem::path& base_dir, int threads) {
  ExperimentOptions defaults;
  defaults.label_counts = {4, 10, 20, 40, 80};
  defaults.noise_levels = {0.0, 0.1, 0.2, 0.3, 0.4};
  defaults.repetitions = 50;
  KeyValueConfig ds;
  for (const char* name : {"sbm_low", "sbm_high"}) {
    ds.set(std::string(name) + ".type", "sbm");
    ds.set(std::string(name) + ".block_sizes", "100,100");
    ds.set(std::string(name) + ".intra", "0.7");
  }
  ds.set("sbm_low.inter", "0.3");
  ds.set("sbm_high.inter", "0.5");
  return run_configured("noise", config, base_dir, threads, defaults,
                        {"sbm_low", "sbm_high"}, ds);
}

ExperimentRun run_accuracy_experiment(const KeyValueConfig& config,
                                      const std::filesystem::path& base_dir, int threads) {
  ExperimentOptions defaults;
  defaults.label_fractions = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
  defaults.noise_levels = {0.0};
  defaults.repetitions = 20;
  KeyValueConfig ds;
  ds.set("karate.type", "karate");
  ds.set("synth.type", "sbm");
  ds.set("synth.block_sizes", "100,100,100");
  ds.set("synth.intra", "0.3");
  ds.set("synth.inter", "0.05");
  ds.set("synth.class_map", "1,-1,-1");
  return run_configured("accuracy", config, base_dir, threads, defaults,
                        {"karate", "synth"}, ds);
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "dataset,method,n_labels,noise,rep,accuracy,param\n";
  for (const auto& r : rows) {
    os << r.dataset << ',' << to_string(r.method) << ',' << r.n_labels << ','
       << format_double(r.noise) << ',' << r.rep << ',' << format_double(r.accuracy)
       << ',' << format_double(r.param) << '\n';
  }
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "dataset,method,n_labels,noise,mean,std,min,max\n";
  for (const auto& r : rows) {
    os << r.dataset << ',' << to_string(r.method) << ',' << r.n_labels << ','
       << format_double(r.noise) << ',' << format_double(r.mean) << ','
       << format_double(r.std) << ',' << format_double(r.min) << ','
       << format_double(r.max) << '\n';
  }
}

void write_experiment(const std::filesystem::path& dir, const ExperimentRun& run) {
  {
    auto os = open_output(dir / "results.csv");
    write_results_csv(os, run.result.rows);
  }
  {
    auto os = open_output(dir / "aggregate.csv");
    write_aggregate_csv(os, run.result.aggregate());
  }
  auto os = open_output(dir / "config.resolved");
  run.resolved.write(os);
}

}  // namespace rgc
