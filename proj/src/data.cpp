#include "rgc/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rgc/error.hpp"
#include "rgc/rng.hpp"

namespace rgc {

namespace {

constexpr int kMaxLabelDraws = 10000;

// 0-based undirected edges of the karate club network.
constexpr std::array<std::array<int, 2>, 78> kKarateEdges{{
    {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},
    {0, 8},   {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},
    {0, 21},  {0, 31},  {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},
    {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},   {2, 9},
    {2, 13},  {2, 27},  {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},
    {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},  {6, 16},  {8, 30},
    {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33}, {15, 32},
    {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
    {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25},
    {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31},
    {28, 33}, {29, 32}, {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33},
    {32, 33},
}};

constexpr std::array<int, 16> kKarateInstructorFaction{
    0, 1, 2, 3, 4, 5, 6, 7, 10, 11, 12, 13, 16, 17, 19, 21};

// First `count` entries of a seeded Fisher-Yates shuffle of `pool`.
template <typename T>
std::vector<T> draw_without_replacement(std::vector<T> pool, Index count,
                                        KeyedStream& stream) {
  const auto n = pool.size();
  for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
    const auto j = k + static_cast<std::size_t>(stream.below(n - k));
    std::swap(pool[k], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace

void SbmSpec::validate() const {
  const auto blocks = static_cast<Index>(block_sizes.size());
  if (blocks < 1) throw Error(ErrorCode::kInvalidArgument, "SBM needs a block");
  for (Index s : block_sizes) {
    if (s < 1) throw Error(ErrorCode::kInvalidArgument, "SBM block sizes must be positive");
  }
  if (connectivity.rows() != blocks || connectivity.cols() != blocks) {
    throw Error(ErrorCode::kDimensionMismatch,
                "SBM connectivity must be blocks x blocks");
  }
  if (connectivity != connectivity.transpose()) {
    throw Error(ErrorCode::kInvalidArgument, "SBM connectivity must be symmetric");
  }
  if ((connectivity.array() < 0.0).any() || (connectivity.array() > 1.0).any() ||
      !connectivity.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "SBM probabilities must lie in [0, 1]");
  }
}

SbmSample sbm_generate(const SbmSpec& spec, std::vector<int> class_map) {
  spec.validate();
  const auto blocks = spec.block_sizes.size();
  if (class_map.empty()) {
    class_map.assign(blocks, -1);
    class_map[0] = 1;
  }
  if (class_map.size() != blocks) {
    throw Error(ErrorCode::kDimensionMismatch, "class map needs one entry per block");
  }
  std::vector<Index> block_of;
  for (std::size_t b = 0; b < blocks; ++b) {
    block_of.insert(block_of.end(), static_cast<std::size_t>(spec.block_sizes[b]),
                    static_cast<Index>(b));
  }
  const auto n = static_cast<Index>(block_of.size());

  for (int attempt = 0; attempt < kSbmMaxAttempts; ++attempt) {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(attempt);
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double p = spec.connectivity(block_of[i], block_of[j]);
        if (keyed_uniform(seed, RngTag::kSbmEdge, static_cast<std::uint64_t>(i),
                          static_cast<std::uint64_t>(j)) < p) {
          edges.push_back({i, j, 1.0});
        }
      }
    }
    if (n > 1 && connected_components(n, edges).size() != 1) continue;
    if (n == 1) break;
    SbmSample out{WeightedGraph::from_edge_list(n, edges), {}, block_of, seed};
    out.truth.reserve(static_cast<std::size_t>(n));
    for (Index b : block_of) out.truth.push_back(class_map[b]);
    return out;
  }
  std::ostringstream os;
  os << "no connected SBM draw in " << kSbmMaxAttempts << " attempts from seed "
     << spec.seed;
  throw Error(ErrorCode::kDisconnectedAfterRetries, os.str());
}

GraphWithTruth chain_graph(Index n_per_side, double weak_weight) {
  if (n_per_side < 1) {
    throw Error(ErrorCode::kInvalidArgument, "chain needs n_per_side >= 1");
  }
  if (!(weak_weight > 0.0) || !std::isfinite(weak_weight)) {
    throw Error(ErrorCode::kInvalidArgument, "weak link weight must be positive");
  }
  const Index n = 2 * n_per_side;
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, i + 1 == n_per_side ? weak_weight : 1.0});
  }
  std::vector<int> truth(static_cast<std::size_t>(n), -1);
  std::fill_n(truth.begin(), n_per_side, 1);
  return {WeightedGraph::from_edge_list(n, edges), std::move(truth)};
}

GraphWithTruth karate_club() {
  std::vector<Edge> edges;
  edges.reserve(kKarateEdges.size());
  for (const auto& [i, j] : kKarateEdges) edges.push_back({i, j, 1.0});
  std::vector<int> truth(34, -1);
  for (int i : kKarateInstructorFaction) truth[static_cast<std::size_t>(i)] = 1;
  return {WeightedGraph::from_edge_list(34, edges), std::move(truth)};
}

LabelVector sample_labels(std::span<const int> truth, Index count,
                          std::uint64_t seed) {
  const auto n = static_cast<Index>(truth.size());
  if (count > n) {
    std::ostringstream os;
    os << "cannot label " << count << " of " << n << " nodes";
    throw Error(ErrorCode::kCountTooLarge, os.str());
  }
  if (count < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 labels");
  const bool both = std::find(truth.begin(), truth.end(), 1) != truth.end() &&
                    std::find(truth.begin(), truth.end(), -1) != truth.end();
  if (!both) {
    throw Error(ErrorCode::kInvalidArgument, "truth must contain both classes");
  }
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  for (int draw = 0; draw < kMaxLabelDraws; ++draw) {
    KeyedStream stream(seed, RngTag::kLabelSample, static_cast<std::uint64_t>(draw));
    const auto chosen = draw_without_replacement(all, count, stream);
    Vector y = Vector::Zero(n);
    for (Index i : chosen) y[i] = truth[static_cast<std::size_t>(i)];
    LabelVector labels(std::move(y));
    if (labels.has_both_classes()) return labels;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "could not draw a label set covering both classes");
}

LabelVector sample_labels_per_class(std::span<const int> truth, Index per_class,
                                    std::uint64_t seed) {
  if (per_class < 1) throw Error(ErrorCode::kInvalidArgument, "per_class must be >= 1");
  Vector y = Vector::Zero(static_cast<Index>(truth.size()));
  for (int cls : {1, -1}) {
    std::vector<Index> members;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i] == cls) members.push_back(static_cast<Index>(i));
    }
    if (static_cast<Index>(members.size()) < per_class) {
      std::ostringstream os;
      os << "class " << cls << " has " << members.size() << " nodes, need " << per_class;
      throw Error(ErrorCode::kCountTooLarge, os.str());
    }
    KeyedStream stream(seed, RngTag::kLabelSample, cls == 1 ? 1u : 2u);
    for (Index i : draw_without_replacement(members, per_class, stream)) y[i] = cls;
  }
  return LabelVector(std::move(y));
}

Index flip_count(double fraction, Index labelled) {
  return static_cast<Index>(
      std::floor(fraction * static_cast<double>(labelled) + 0.5 + 1e-9));
}

LabelVector flip_labels(const LabelVector& labels, double fraction,
                        std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    std::ostringstream os;
    os << "flip fraction " << fraction << " outside [0, 1)";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  const std::vector<Index> labelled = labels.labelled();
  const Index m = flip_count(fraction, static_cast<Index>(labelled.size()));
  KeyedStream stream(seed, RngTag::kLabelFlip);
  Vector y = labels.values();
  for (Index i : draw_without_replacement(labelled, m, stream)) y[i] = -y[i];
  return LabelVector(std::move(y));
}

PointsWithTruth moons_generate(Index n_per_class, double noise_std,
                               std::uint64_t seed) {
  if (n_per_class < 1) {
    throw Error(ErrorCode::kInvalidArgument, "moons need n_per_class >= 1");
  }
  if (!(noise_std >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise std must be >= 0");
  }
  PointsWithTruth out;
  out.points.coords.resize(2 * n_per_class, 2);
  out.truth.resize(static_cast<std::size_t>(2 * n_per_class));
  for (Index k = 0; k < n_per_class; ++k) {
    const double t = n_per_class == 1
                         ? 0.0
                         : std::numbers::pi * static_cast<double>(k) /
                               static_cast<double>(n_per_class - 1);
    out.points.coords.row(k) << std::cos(t), std::sin(t);
    out.points.coords.row(n_per_class + k) << 1.0 - std::cos(t), 0.5 - std::sin(t);
    out.truth[static_cast<std::size_t>(k)] = 1;
    out.truth[static_cast<std::size_t>(n_per_class + k)] = -1;
  }
  if (noise_std > 0.0) {
    for (Index r = 0; r < out.points.size(); ++r) {
      KeyedStream stream(seed, RngTag::kMoonsNoise, static_cast<std::uint64_t>(r));
      out.points.coords(r, 0) += noise_std * stream.normal();
      out.points.coords(r, 1) += noise_std * stream.normal();
    }
  }
  return out;
}

}  // namespace rgc
