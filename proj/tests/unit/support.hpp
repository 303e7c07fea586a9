#pragma once

// Shared fixtures for tests: random connected graphs and dense oracles that
// are built directly from W, independent of the library's spectral code.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "rgc/data.hpp"
#include "rgc/error.hpp"
#include "rgc/graph.hpp"
#include "rgc/rng.hpp"

namespace rgc::testing {

inline PointCloud random_points(Index n, Index dim, std::uint64_t seed) {
  KeyedStream s(seed, RngTag::kTest, 1);
  PointCloud pc;
  pc.coords.resize(n, dim);
  for (Index i = 0; i < n; ++i) {
    for (Index d = 0; d < dim; ++d) pc.coords(i, d) = 2.0 * s.uniform() - 1.0;
  }
  return pc;
}

enum class GraphKind { kKernel, kKnn, kSbm };

// Connected random graph of size n; kind cycles through kernel, kNN and SBM.
inline WeightedGraph random_graph(Index n, GraphKind kind, std::uint64_t seed) {
  KeyedStream s(seed, RngTag::kTest, 2);
  switch (kind) {
    case GraphKind::kKernel: {
      const double sigma = 0.3 + 1.2 * s.uniform();
      return kernel_graph(random_points(n, 2, seed), KernelSpec{sigma});
    }
    case GraphKind::kKnn: {
      for (std::uint64_t attempt = 0;; ++attempt) {
        const int k = 3 + static_cast<int>(s.below(4));
        try {
          return knn_graph(random_points(n, 2, seed * 1000 + attempt),
                           std::min<int>(k, static_cast<int>(n) - 1));
        } catch (const Error&) {
        }
      }
    }
    case GraphKind::kSbm: {
      SbmSpec spec;
      const Index a = n / 2;
      spec.block_sizes = {a, n - a};
      const double intra = 0.4 + 0.5 * s.uniform();
      const double inter = 0.05 + 0.2 * s.uniform();
      spec.connectivity.resize(2, 2);
      spec.connectivity << intra, inter, inter, intra;
      spec.seed = seed;
      return sbm_generate(spec).graph;
    }
  }
  return kernel_graph(random_points(n, 2, seed), KernelSpec{1.0});
}

// Dense S = D^{-1/2} W D^{-1/2} from an explicit double loop.
inline Eigen::MatrixXd oracle_S(const WeightedGraph& g) {
  const Eigen::MatrixXd W = g.to_dense();
  const Index n = W.rows();
  Eigen::VectorXd d = W.rowwise().sum();
  Eigen::MatrixXd S(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) S(i, j) = W(i, j) / std::sqrt(d[i] * d[j]);
  }
  return 0.5 * (S + S.transpose());
}

inline Eigen::MatrixXd oracle_LN(const WeightedGraph& g) {
  const Eigen::MatrixXd S = oracle_S(g);
  return Eigen::MatrixXd::Identity(S.rows(), S.cols()) - S;
}

struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline DenseSpectrum oracle_spectrum(const WeightedGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle_LN(g));
  return {es.eigenvalues(), es.eigenvectors()};
}

// Labels in {-1, 0, +1} with at least one of each sign.
inline Eigen::VectorXd random_labels(Index n, std::uint64_t seed) {
  KeyedStream s(seed, RngTag::kTest, 3);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double u = s.uniform();
    y[i] = u < 0.25 ? 1.0 : (u < 0.5 ? -1.0 : 0.0);
  }
  y[0] = 1.0;
  y[n - 1] = -1.0;
  return y;
}

}  // namespace rgc::testing
