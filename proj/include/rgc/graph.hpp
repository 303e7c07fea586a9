#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace rgc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Edge {
  Index i = 0;
  Index j = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Points stored row-wise: coords is n x dim.
struct PointCloud {
  Matrix coords;

  Index size() const { return coords.rows(); }
  Index dim() const { return coords.cols(); }
  auto point(Index i) const { return coords.row(i); }

  // Throws InvalidArgument unless n >= 2, dim >= 1 and all entries finite.
  void validate() const;
};

// Gaussian kernel k(x, y) = exp(-|x - y|^2 / (2 sigma^2)).
struct KernelSpec {
  double sigma = 1.0;

  void validate() const;

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                    const Eigen::Ref<const Eigen::RowVectorXd>& y) const;

  double from_squared_distance(double sq) const;

  // k(x, x); 1 for the Gaussian kernel.
  double self_value() const { return 1.0; }
};

// Symmetric, non-negative, connected weighted graph with cached degrees.
// Immutable once built; sparse storage for edge-list and kNN graphs, dense
// storage for kernel graphs.
class WeightedGraph {
 public:
  // Each unordered pair may appear more than once only with an identical
  // weight. Self-loops (i == j) count once toward d_i.
  static WeightedGraph from_edge_list(Index n, std::span<const Edge> edges);

  // Takes a dense symmetric weight matrix (kernel graphs).
  static WeightedGraph from_dense(Matrix weights);

  // Takes a sparse weight matrix; symmetry is checked exactly.
  static WeightedGraph from_sparse(SparseMatrix weights);

  Index size() const { return degrees_.size(); }
  const Vector& degrees() const { return degrees_; }
  bool is_dense() const { return std::holds_alternative<Matrix>(weights_); }

  double weight(Index i, Index j) const;

  // y = W x, sequential row-wise reduction.
  Vector multiply(const Vector& x) const;

  Matrix to_dense() const;

  // Stored pairs with i <= j and w > 0, row-major order.
  std::vector<Edge> edges() const;

  // Number of stored unordered pairs (self-loops included).
  std::size_t edge_count() const;

 private:
  explicit WeightedGraph(std::variant<SparseMatrix, Matrix> weights);
  void finish();

  std::variant<SparseMatrix, Matrix> weights_;
  Vector degrees_;
};

// Connected components of the (possibly disconnected) edge set, each sorted,
// ordered by their smallest member.
std::vector<std::vector<Index>> connected_components(
    Index n, std::span<const Edge> edges);

struct ComponentExtraction {
  Index n = 0;
  std::vector<Edge> edges;           // re-indexed to [0, n)
  std::vector<Index> original_ids;   // new id -> old id
};

// Keeps the largest connected component (ties: the one with the smallest
// member) and relabels it contiguously in the original order.
ComponentExtraction largest_component(Index n, std::span<const Edge> edges);

// w_ij = k(x_i, x_j) for every pair including i == j.
WeightedGraph kernel_graph(const PointCloud& points, const KernelSpec& kernel);

// Directed 0/1 k-nearest-neighbour graph under the l2 distance, symmetrized
// as (W + W^T) / 2. Distance ties go to the smaller index.
WeightedGraph knn_graph(const PointCloud& points, int k);

}  // namespace rgc
