#include "rgc/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rgc/error.hpp"
#include "rgc/rng.hpp"

namespace rgc {

namespace {

constexpr std::uint64_t kStartSeed = 0x5eedULL;

void check_length(const Vector& x, Index n) {
  if (x.size() != n) {
    std::ostringstream os;
    os << "vector of length " << x.size() << " given for a graph with n = " << n;
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

Vector start_vector(Index n, std::uint64_t column) {
  KeyedStream stream(kStartSeed, RngTag::kPowerStart, column);
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[i] = 2.0 * stream.uniform() - 1.0;
  return x;
}

void make_signs_canonical(Matrix& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    for (Index i = 0; i < vectors.rows(); ++i) {
      const double v = vectors(i, c);
      if (std::abs(v) > 1e-8) {
        if (v < 0.0) vectors.col(c) *= -1.0;
        break;
      }
    }
  }
}

Matrix orthonormal_basis(const Matrix& block) {
  Eigen::HouseholderQR<Matrix> qr(block);
  return qr.householderQ() * Matrix::Identity(block.rows(), block.cols());
}

EigenPairs dense_eigenpairs(const SpectralContext& ctx, Index p) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dense_normalized_laplacian(ctx));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNoConvergence, "dense eigensolver failed");
  }
  EigenPairs out{solver.eigenvalues().head(p), solver.eigenvectors().leftCols(p)};
  make_signs_canonical(out.vectors);
  return out;
}

// Orthogonal iteration with Rayleigh-Ritz on B = S + I restricted to v0-perp;
// v0 itself is known exactly and prepended.
EigenPairs iterative_eigenpairs(const SpectralContext& ctx, Index p,
                                const EigenOptions& options) {
  const Index n = ctx.size();
  const Vector& v0 = ctx.v0();
  EigenPairs out{Vector::Zero(p), Matrix::Zero(n, p)};
  out.vectors.col(0) = v0;
  if (p == 1) return out;

  const Index wanted = p - 1;
  const Index block = std::min<Index>(n - 1, wanted + std::max<Index>(8, wanted / 2));

  auto deflate = [&](Matrix& m) {
    for (Index c = 0; c < m.cols(); ++c) {
      m.col(c) -= v0 * v0.dot(m.col(c));
    }
  };
  auto apply_b = [&](const Matrix& x) {
    Matrix y(n, x.cols());
    for (Index c = 0; c < x.cols(); ++c) {
      const Vector col = x.col(c);
      y.col(c) = ctx.apply_S(col) + col;
    }
    deflate(y);
    return y;
  };

  Matrix x(n, block);
  for (Index c = 0; c < block; ++c) x.col(c) = start_vector(n, static_cast<std::uint64_t>(c));
  deflate(x);
  x = orthonormal_basis(x);
  deflate(x);

  double worst = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Matrix y = apply_b(x);
    Matrix h = x.transpose() * y;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> ritz(h);
    // Descending Ritz values of B are ascending eigenvalues of L^N.
    const Matrix u = ritz.eigenvectors().rowwise().reverse();
    const Vector mu = ritz.eigenvalues().reverse();
    const Matrix xr = x * u;
    const Matrix yr = y * u;

    worst = 0.0;
    for (Index k = 0; k < wanted; ++k) {
      worst = std::max(worst, (yr.col(k) - mu[k] * xr.col(k)).norm());
    }
    if (worst <= options.residual_tol) {
      for (Index k = 0; k < wanted; ++k) {
        out.values[k + 1] = 2.0 - mu[k];
        out.vectors.col(k + 1) = xr.col(k).normalized();
      }
      make_signs_canonical(out.vectors);
      return out;
    }
    x = orthonormal_basis(yr);
    deflate(x);
  }
  std::ostringstream os;
  os << "orthogonal iteration hit " << options.max_iterations
     << " iterations; worst Ritz residual " << worst;
  throw Error(ErrorCode::kNoConvergence, os.str());
}

}  // namespace

namespace {

// Largest Ritz value of B on the Krylov block {x, Bx, B^2 x, ...},
// orthonormalized against v0 and itself. A stalled power iterate leaves an
// error of roughly (change per step) / (1 - convergence ratio) in the
// Rayleigh quotient; the Ritz value removes most of it.
template <typename ApplyB>
double krylov_refine(const ApplyB& apply_b, const Vector& x, const Vector& v0) {
  constexpr Index kBlock = 24;
  const Index n = x.size();
  const Index m = std::min<Index>(kBlock, n - 1);
  Matrix q(n, m);
  Matrix bq(n, m);
  q.col(0) = x.normalized();
  Index cols = 1;
  for (Index j = 0; j < m; ++j) {
    bq.col(j) = apply_b(Vector(q.col(j)));
    if (j + 1 == m) break;
    Vector w = bq.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      w -= v0 * v0.dot(w);
      w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
    }
    const double norm = w.norm();
    if (norm <= 1e-10 * bq.col(j).norm()) break;
    q.col(j + 1) = w / norm;
    cols = j + 2;
  }
  Matrix t = q.leftCols(cols).transpose() * bq.leftCols(cols);
  t = 0.5 * (t + t.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(t, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[cols - 1];
}

}  // namespace

Lambda1Estimate compute_lambda1(const WeightedGraph& graph,
                                const Vector& inv_sqrt_degrees,
                                const Vector& v0,
                                const PowerIterationOptions& options) {
  const Index n = graph.size();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "lambda1 needs at least two nodes");
  }
  auto apply_b = [&](const Vector& x) {
    Vector y = inv_sqrt_degrees.cwiseProduct(
                   graph.multiply(inv_sqrt_degrees.cwiseProduct(x))) +
               x;
    y -= v0 * v0.dot(y);
    return y;
  };

  Vector x = start_vector(n, 0);
  x -= v0 * v0.dot(x);
  x.normalize();

  double previous = std::numeric_limits<double>::quiet_NaN();
  double theta = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Vector y = apply_b(x);
    theta = x.dot(y);
    const double norm = y.norm();
    if (norm == 0.0) {
      // B vanishes on v0-perp: every nonzero eigenvalue of L^N equals 2.
      return {2.0, it};
    }
    if (std::abs(theta - previous) <= options.rel_tol * std::abs(theta)) {
      return {2.0 - std::max(theta, krylov_refine(apply_b, x, v0)), it};
    }
    previous = theta;
    x = y / norm;
  }
  const double residual = (apply_b(x) - theta * x).norm();
  std::ostringstream os;
  os << "power iteration hit " << options.max_iterations
     << " iterations; last Rayleigh quotient " << theta
     << " (lambda1 ~ " << 2.0 - theta << "), residual " << residual;
  throw Error(ErrorCode::kNoConvergence, os.str());
}

SpectralContext::SpectralContext(WeightedGraph graph,
                                 const PowerIterationOptions& options)
    : SpectralContext(std::make_shared<const WeightedGraph>(std::move(graph)),
                      options) {}

SpectralContext::SpectralContext(std::shared_ptr<const WeightedGraph> graph,
                                 const PowerIterationOptions& options)
    : graph_(std::move(graph)) {
  if (!graph_) throw Error(ErrorCode::kInvalidArgument, "null graph");
  const Vector& d = graph_->degrees();
  inv_sqrt_d_ = d.cwiseSqrt().cwiseInverse();
  v0_ = d.cwiseSqrt();
  v0_ /= v0_.norm();
  if (graph_->size() >= 2) {
    const Lambda1Estimate est = compute_lambda1(*graph_, inv_sqrt_d_, v0_, options);
    lambda1_ = est.lambda1;
    lambda1_iterations_ = est.iterations;
  }
}

Vector SpectralContext::apply_S(const Vector& x) const {
  check_length(x, size());
  return inv_sqrt_d_.cwiseProduct(graph_->multiply(inv_sqrt_d_.cwiseProduct(x)));
}

Vector SpectralContext::apply_LN(const Vector& x) const {
  return x - apply_S(x);
}

double SpectralContext::smoothness(const Vector& f) const {
  return 0.5 * f.dot(apply_LN(f));
}

Vector SpectralContext::project_out_v0(const Vector& x) const {
  check_length(x, size());
  return x - v0_ * v0_.dot(x);
}

Matrix dense_normalized_laplacian(const SpectralContext& ctx) {
  const Matrix w = ctx.graph().to_dense();
  const Vector& s = ctx.inv_sqrt_degrees();
  const Index n = ctx.size();
  Matrix l(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      l(i, j) = (i == j ? 1.0 : 0.0) - w(i, j) * (s[i] * s[j]);
    }
  }
  return l;
}

EigenPairs smallest_eigenpairs(const SpectralContext& ctx, Index p,
                               const EigenOptions& options) {
  const Index n = ctx.size();
  if (p > n) {
    std::ostringstream os;
    os << "requested " << p << " eigenpairs of an n = " << n << " graph";
    throw Error(ErrorCode::kPTooLarge, os.str());
  }
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "p must be >= 1");
  if (n <= options.dense_threshold || p == n) return dense_eigenpairs(ctx, p);
  return iterative_eigenpairs(ctx, p, options);
}

bool weights_psd(const WeightedGraph& graph, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(graph.to_dense(),
                                               Eigen::EigenvaluesOnly);
  const Vector& ev = solver.eigenvalues();
  const double scale = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  return ev[0] >= -tol * scale;
}

}  // namespace rgc
