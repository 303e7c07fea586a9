#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rgc/classify.hpp"
#include "rgc/config.hpp"

namespace rgc {

// Parameter grids for perfect validation.
std::vector<double> zhou_grid(int points = 51, double lo = 1e-5, double hi = 1e5);
std::vector<double> belkin_grid(Index n, Index max_p = 51);
// lambda1 * k / (points + 1) for k = 1..points, strictly inside (0, lambda1),
// plus `extra` (if positive) merged in ascending order.
std::vector<double> robust_grid(double lambda1, int points = 51,
                                double extra = 0.0);

// A graph with ground truth and its spectral data, shared read-only by all
// experiment tasks.
struct Dataset {
  std::string name;
  std::shared_ptr<const SpectralContext> context;
  std::vector<int> truth;
  std::shared_ptr<const EigenPairs> eigenpairs;

  Index size() const { return context->size(); }
  // Whether eigenpairs span the whole space (enables closed-form sweeps).
  bool complete_basis() const;
};

// Computes the spectral context and eigenpairs: the full basis when
// n <= dense_threshold, otherwise the first min(n, belkin_max + 1) pairs.
Dataset make_dataset(std::string name, WeightedGraph graph,
                     std::vector<int> truth, Index belkin_max = 51,
                     Index dense_threshold = 512);

// Builds dataset `name` from `<name>.*` keys. Supported `<name>.type`:
//   sbm     block_sizes, intra, inter (or connectivity row-major), class_map, seed
//   karate
//   chain   n_per_side, weak
//   edges   edges (edge-list file), truth (node,label file)
//   points  points (CSV with label column), graph = kernel|knn, sigma, k
// Relative paths resolve against base_dir. Resolved parameters are recorded
// into `resolved`.
Dataset load_dataset(const KeyValueConfig& config, const std::string& name,
                     const std::filesystem::path& base_dir,
                     KeyValueConfig* resolved = nullptr);

// Fraction of unlabelled nodes whose predicted sign matches the truth.
// Throws EmptyEvaluationSet when every node is labelled.
double accuracy(const Vector& scores, std::span<const int> truth,
                const LabelVector& labels);

struct ValidationOutcome {
  double param = 0.0;
  double accuracy = 0.0;
  std::vector<double> accuracies;  // per grid point, NaN where the solve failed
  std::vector<std::string> warnings;
};

// Evaluates every grid point by test accuracy and keeps the best, breaking
// ties towards the smallest parameter. Robust and Zhou use the closed form
// when the dataset has a complete eigenbasis and CG otherwise. Failed grid
// points are skipped with a warning; AllGridPointsFailed if none succeed.
ValidationOutcome perfect_validation(
    const Dataset& data, const LabelVector& labels, Method method,
    std::span<const double> grid,
    BelkinBasis belkin_basis = BelkinBasis::kFromNullVector);

struct ExperimentOptions {
  std::vector<Index> label_counts;      // explicit sizes, used when non-empty
  std::vector<double> label_fractions;  // round(f * n), at least 2
  std::vector<double> noise_levels{0.0};
  int repetitions = 20;
  std::vector<Method> methods{Method::kZhou, Method::kBelkin, Method::kRobust,
                              Method::kPfRobust};
  double pf_eta = 0.9;
  std::uint64_t seed = 0;
  int grid_points = 51;
  double zhou_min = 1e-5;
  double zhou_max = 1e5;
  Index belkin_max = 51;
  // Explicit grids; each replaces the generated one when non-empty. Robust
  // values are multiples of lambda1.
  std::vector<double> zhou_values;
  std::vector<double> belkin_values;
  std::vector<double> robust_fractions;
  BelkinBasis belkin_basis = BelkinBasis::kFromNullVector;
};

// Label sizes evaluated on a graph of n nodes, in first-seen order.
std::vector<Index> label_sizes(const ExperimentOptions& options, Index n);

struct ResultRow {
  std::string dataset;
  Method method = Method::kRobust;
  Index n_labels = 0;
  double noise = 0.0;
  int rep = 0;
  double accuracy = 0.0;
  double param = 0.0;
};

struct AggregateRow {
  std::string dataset;
  Method method = Method::kRobust;
  Index n_labels = 0;
  double noise = 0.0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single repetition
  double min = 0.0;
  double max = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;  // dataset, n_labels, noise, method, rep order
  std::vector<std::string> warnings;

  std::vector<AggregateRow> aggregate() const;
};

// For each dataset, label size, noise level, and repetition: one label
// sample per (size, repetition), shared by all noise levels, then a noise
// draw and every method. Tasks run on `threads` workers (0 = hardware
// concurrency); the result does not depend on the thread count.
ExperimentResult run_experiment(const std::vector<Dataset>& datasets,
                                const ExperimentOptions& options,
                                int threads = 1);

struct ExperimentRun {
  ExperimentResult result;
  KeyValueConfig resolved;  // every parameter actually used
};

// Noise-robustness sweep. Defaults: two SBMs of 2 x 100 nodes with intra
// 0.7 and inter 0.3 / 0.5, sizes 4,10,20,40,80, noise 0..0.4, 50 repetitions.
ExperimentRun run_noise_experiment(const KeyValueConfig& config,
                                   const std::filesystem::path& base_dir = {},
                                   int threads = 1);

// Accuracy table. Defaults: karate and the 3-block synth SBM, label
// fractions 1,2,5,10,20,50 %, 20 repetitions, no noise.
ExperimentRun run_accuracy_experiment(const KeyValueConfig& config,
                                      const std::filesystem::path& base_dir = {},
                                      int threads = 1);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_aggregate_csv(std::ostream& os,
                         const std::vector<AggregateRow>& rows);

// Writes results.csv, aggregate.csv, and config.resolved into `dir`.
void write_experiment(const std::filesystem::path& dir, const ExperimentRun& run);

}  // namespace rgc
