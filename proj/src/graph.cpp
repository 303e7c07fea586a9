#include "rgc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "rgc/error.hpp"

namespace rgc {

namespace {

template <typename Visit>
void for_each_neighbour(const std::variant<SparseMatrix, Matrix>& weights,
                        Index i, Visit&& visit) {
  if (const auto* sparse = std::get_if<SparseMatrix>(&weights)) {
    for (SparseMatrix::InnerIterator it(*sparse, i); it; ++it) {
      if (it.value() > 0.0) visit(it.col());
    }
  } else {
    const Matrix& dense = std::get<Matrix>(weights);
    for (Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) > 0.0) visit(j);
    }
  }
}

template <typename Neighbours>
std::vector<std::vector<Index>> bfs_components(Index n,
                                               Neighbours&& neighbours) {
  std::vector<Index> component(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Index>> out;
  std::deque<Index> queue;
  for (Index start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    const auto id = static_cast<Index>(out.size());
    out.emplace_back();
    component[start] = id;
    queue.push_back(start);
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      out.back().push_back(u);
      neighbours(u, [&](Index v) {
        if (component[v] < 0) {
          component[v] = id;
          queue.push_back(v);
        }
      });
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

[[noreturn]] void throw_disconnected(std::vector<std::vector<Index>> parts) {
  std::vector<std::vector<std::ptrdiff_t>> converted;
  converted.reserve(parts.size());
  for (auto& p : parts) converted.emplace_back(p.begin(), p.end());
  throw DisconnectedError(std::move(converted));
}

void check_index(Index v, Index n) {
  if (v < 0 || v >= n) {
    std::ostringstream os;
    os << "node index " << v << " outside [0, " << n << ")";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

}  // namespace

void PointCloud::validate() const {
  if (size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "point cloud needs n >= 2");
  }
  if (dim() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "point cloud needs dim >= 1");
  }
  if (!coords.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "point coordinates must be finite");
  }
}

void KernelSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "kernel bandwidth must be > 0");
  }
}

double KernelSpec::from_squared_distance(double sq) const {
  return std::exp(-sq / (2.0 * sigma * sigma));
}

double KernelSpec::operator()(
    const Eigen::Ref<const Eigen::RowVectorXd>& x,
    const Eigen::Ref<const Eigen::RowVectorXd>& y) const {
  return from_squared_distance((x - y).squaredNorm());
}

WeightedGraph::WeightedGraph(std::variant<SparseMatrix, Matrix> weights)
    : weights_(std::move(weights)) {
  finish();
}

void WeightedGraph::finish() {
  const Index n = std::visit([](const auto& m) { return Index{m.rows()}; },
                             weights_);
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "graph needs n >= 1");

  auto parts = bfs_components(n, [&](Index u, auto&& visit) {
    for_each_neighbour(weights_, u, visit);
  });
  if (parts.size() > 1) throw_disconnected(std::move(parts));

  degrees_ = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    double d = 0.0;
    if (const auto* sparse = std::get_if<SparseMatrix>(&weights_)) {
      for (SparseMatrix::InnerIterator it(*sparse, i); it; ++it) d += it.value();
    } else {
      const Matrix& dense = std::get<Matrix>(weights_);
      for (Index j = 0; j < n; ++j) d += dense(i, j);
    }
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "node " << i << " has zero degree";
      throw Error(ErrorCode::kIsolatedNode, os.str());
    }
    degrees_[i] = d;
  }
}

WeightedGraph WeightedGraph::from_edge_list(Index n,
                                            std::span<const Edge> edges) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "graph needs n >= 1");
  std::map<std::pair<Index, Index>, double> unique;
  for (const Edge& e : edges) {
    check_index(e.i, n);
    check_index(e.j, n);
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      std::ostringstream os;
      os << "edge (" << e.i << ", " << e.j << ") has non-positive weight "
         << e.w;
      throw Error(ErrorCode::kInvalidArgument, os.str());
    }
    const auto key = std::minmax(e.i, e.j);
    auto [it, inserted] = unique.emplace(key, e.w);
    if (!inserted && it->second != e.w) {
      std::ostringstream os;
      os << "edge (" << key.first << ", " << key.second << ") given with weights "
         << it->second << " and " << e.w;
      throw Error(ErrorCode::kDuplicateEdgeConflict, os.str());
    }
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(unique.size() * 2);
  for (const auto& [key, w] : unique) {
    triplets.emplace_back(key.first, key.second, w);
    if (key.first != key.second) triplets.emplace_back(key.second, key.first, w);
  }
  SparseMatrix w(n, n);
  w.setFromTriplets(triplets.begin(), triplets.end());
  w.makeCompressed();
  return WeightedGraph(std::move(w));
}

WeightedGraph WeightedGraph::from_dense(Matrix weights) {
  if (weights.rows() != weights.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "weight matrix must be square");
  }
  if (!weights.allFinite() || (weights.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument,
                "weights must be finite and non-negative");
  }
  if (weights != weights.transpose()) {
    throw Error(ErrorCode::kInvalidArgument, "weight matrix is not symmetric");
  }
  return WeightedGraph(std::move(weights));
}

WeightedGraph WeightedGraph::from_sparse(SparseMatrix weights) {
  if (weights.rows() != weights.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "weight matrix must be square");
  }
  weights.prune(0.0);
  weights.makeCompressed();
  for (Index k = 0; k < weights.nonZeros(); ++k) {
    const double v = weights.valuePtr()[k];
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "weights must be finite and non-negative");
    }
  }
  const SparseMatrix transposed = weights.transpose();
  SparseMatrix difference = weights - transposed;
  difference.prune(0.0);
  if (difference.nonZeros() != 0) {
    throw Error(ErrorCode::kInvalidArgument, "weight matrix is not symmetric");
  }
  return WeightedGraph(std::move(weights));
}

double WeightedGraph::weight(Index i, Index j) const {
  if (const auto* sparse = std::get_if<SparseMatrix>(&weights_)) {
    return sparse->coeff(i, j);
  }
  return std::get<Matrix>(weights_)(i, j);
}

Vector WeightedGraph::multiply(const Vector& x) const {
  const Index n = size();
  if (x.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "vector length differs from n");
  }
  Vector y(n);
  if (const auto* sparse = std::get_if<SparseMatrix>(&weights_)) {
    for (Index i = 0; i < n; ++i) {
      double acc = 0.0;
      for (SparseMatrix::InnerIterator it(*sparse, i); it; ++it) {
        acc += it.value() * x[it.col()];
      }
      y[i] = acc;
    }
  } else {
    // W is symmetric, so column j of W is row j; column access is contiguous.
    const Matrix& dense = std::get<Matrix>(weights_);
    for (Index i = 0; i < n; ++i) y[i] = dense.col(i).dot(x);
  }
  return y;
}

Matrix WeightedGraph::to_dense() const {
  if (const auto* sparse = std::get_if<SparseMatrix>(&weights_)) {
    return Matrix(*sparse);
  }
  return std::get<Matrix>(weights_);
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  const Index n = size();
  if (const auto* sparse = std::get_if<SparseMatrix>(&weights_)) {
    for (Index i = 0; i < n; ++i) {
      for (SparseMatrix::InnerIterator it(*sparse, i); it; ++it) {
        if (it.col() >= i && it.value() > 0.0) {
          out.push_back({i, it.col(), it.value()});
        }
      }
    }
  } else {
    const Matrix& dense = std::get<Matrix>(weights_);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        if (dense(i, j) > 0.0) out.push_back({i, j, dense(i, j)});
      }
    }
  }
  return out;
}

std::size_t WeightedGraph::edge_count() const { return edges().size(); }

std::vector<std::vector<Index>> connected_components(
    Index n, std::span<const Edge> edges) {
  std::vector<std::vector<Index>> adjacency(static_cast<std::size_t>(n));
  for (const Edge& e : edges) {
    check_index(e.i, n);
    check_index(e.j, n);
    if (e.i == e.j) continue;
    adjacency[e.i].push_back(e.j);
    adjacency[e.j].push_back(e.i);
  }
  return bfs_components(n, [&](Index u, auto&& visit) {
    for (Index v : adjacency[u]) visit(v);
  });
}

ComponentExtraction largest_component(Index n, std::span<const Edge> edges) {
  const auto parts = connected_components(n, edges);
  const auto largest = std::max_element(
      parts.begin(), parts.end(),
      [](const auto& a, const auto& b) { return a.size() < b.size(); });
  ComponentExtraction out;
  out.original_ids = *largest;
  out.n = static_cast<Index>(out.original_ids.size());
  std::vector<Index> new_id(static_cast<std::size_t>(n), -1);
  for (Index k = 0; k < out.n; ++k) new_id[out.original_ids[k]] = k;
  for (const Edge& e : edges) {
    if (new_id[e.i] >= 0 && new_id[e.j] >= 0) {
      out.edges.push_back({new_id[e.i], new_id[e.j], e.w});
    }
  }
  return out;
}

WeightedGraph kernel_graph(const PointCloud& points, const KernelSpec& kernel) {
  points.validate();
  kernel.validate();
  const Index n = points.size();
  Matrix w(n, n);
  for (Index i = 0; i < n; ++i) {
    w(i, i) = kernel(points.point(i), points.point(i));
    for (Index j = i + 1; j < n; ++j) {
      const double k = kernel(points.point(i), points.point(j));
      w(i, j) = k;
      w(j, i) = k;
    }
  }
  return WeightedGraph::from_dense(std::move(w));
}

WeightedGraph knn_graph(const PointCloud& points, int k) {
  points.validate();
  const Index n = points.size();
  if (k < 1 || k >= n) {
    std::ostringstream os;
    os << "knn graph needs 1 <= k < n, got k = " << k << " with n = " << n;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  Matrix adjacency = Matrix::Zero(n, n);
  std::vector<std::pair<double, Index>> candidates;
  for (Index i = 0; i < n; ++i) {
    candidates.clear();
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      candidates.emplace_back((points.point(i) - points.point(j)).squaredNorm(),
                              j);
    }
    std::partial_sort(candidates.begin(), candidates.begin() + k,
                      candidates.end());
    for (int r = 0; r < k; ++r) adjacency(i, candidates[r].second) = 1.0;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double w = 0.5 * (adjacency(i, j) + adjacency(j, i));
      if (w > 0.0) triplets.emplace_back(i, j, w);
    }
  }
  SparseMatrix w(n, n);
  w.setFromTriplets(triplets.begin(), triplets.end());
  return WeightedGraph::from_sparse(std::move(w));
}

}  // namespace rgc
