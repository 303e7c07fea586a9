#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rgc/classify.hpp"
#include "rgc/graph.hpp"

namespace rgc {

struct SbmSpec {
  std::vector<Index> block_sizes;
  Matrix connectivity;  // symmetric, entries in [0, 1]
  std::uint64_t seed = 0;

  void validate() const;
};

struct GraphWithTruth {
  WeightedGraph graph;
  std::vector<int> truth;  // +1 / -1 per node
};

struct SbmSample {
  WeightedGraph graph;
  std::vector<int> truth;
  std::vector<Index> blocks;     // block id per node
  std::uint64_t seed_used = 0;   // spec.seed + number of rejected draws
};

inline constexpr int kSbmMaxAttempts = 100;

// Unit-weight SBM: pair (i, j), i < j, is an edge iff
// keyed_uniform(seed, SbmEdge, i, j) < P[block(i)][block(j)]. A disconnected
// draw is retried with seed + 1, up to kSbmMaxAttempts draws in total.
// class_map gives the class of each block; by default block 0 is +1 and the
// rest are -1.
SbmSample sbm_generate(const SbmSpec& spec, std::vector<int> class_map = {});

// Path of 2 * n_per_side nodes with unit weights except the middle edge.
// First half +1, second half -1.
GraphWithTruth chain_graph(Index n_per_side, double weak_weight = 0.1);

// Zachary's karate club, unit weights, 34 nodes and 78 edges. Truth: the
// 16-member instructor faction is +1, the 18-member officer faction -1.
GraphWithTruth karate_club();

// Uniform sample of `count` nodes without replacement, redrawn with a new
// sub-stream until both classes appear. Labels come from `truth`.
LabelVector sample_labels(std::span<const int> truth, Index count,
                          std::uint64_t seed);

// `per_class` nodes drawn uniformly from each of the two classes.
LabelVector sample_labels_per_class(std::span<const int> truth, Index per_class,
                                    std::uint64_t seed);

// round-half-up(fraction * labelled).
Index flip_count(double fraction, Index labelled);

// Negates flip_count(fraction, s) labelled entries chosen uniformly; the
// choice depends only on the labelled set and the seed.
LabelVector flip_labels(const LabelVector& labels, double fraction,
                        std::uint64_t seed);

struct PointsWithTruth {
  PointCloud points;
  std::vector<int> truth;
};

// Two interleaved unit half-circles: the upper arc (cos t, sin t) is +1, the
// lower arc (1 - cos t, 0.5 - sin t) is -1, t evenly spaced on [0, pi].
// Isotropic Gaussian noise with the given standard deviation is added.
PointsWithTruth moons_generate(Index n_per_class, double noise_std,
                               std::uint64_t seed);

struct LabelledDataset {
  WeightedGraph graph;
  std::vector<int> truth;
  LabelVector observed;
};

}  // namespace rgc
