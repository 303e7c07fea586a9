#pragma once

#include <memory>

#include "rgc/graph.hpp"

namespace rgc {

struct PowerIterationOptions {
  double rel_tol = 1e-10;       // on successive Rayleigh quotients
  int max_iterations = 50000;
};

struct Lambda1Estimate {
  double lambda1 = 0.0;
  int iterations = 0;
};

// Second-smallest eigenvalue of the normalized Laplacian by power iteration
// on the shifted, deflated operator (S + I) - 2 v0 v0^T, whose spectrum lies
// in [0, 2] with 2 - lambda1 as its largest eigenvalue. The iterate is
// re-orthogonalized against v0 every step. Once successive Rayleigh quotients
// agree to rel_tol, a Rayleigh-Ritz step on a short Krylov block from the
// final iterate sharpens the estimate.
Lambda1Estimate compute_lambda1(const WeightedGraph& graph,
                                const Vector& inv_sqrt_degrees,
                                const Vector& v0,
                                const PowerIterationOptions& options = {});

// Per-graph spectral data: S = D^{-1/2} W D^{-1/2}, the unit null vector v0 of
// L^N = I - S, and lambda1. Immutable; all members are safe to call
// concurrently.
class SpectralContext {
 public:
  explicit SpectralContext(WeightedGraph graph,
                           const PowerIterationOptions& options = {});
  explicit SpectralContext(std::shared_ptr<const WeightedGraph> graph,
                           const PowerIterationOptions& options = {});

  const WeightedGraph& graph() const { return *graph_; }
  const std::shared_ptr<const WeightedGraph>& graph_ptr() const {
    return graph_;
  }
  Index size() const { return graph_->size(); }

  const Vector& inv_sqrt_degrees() const { return inv_sqrt_d_; }
  const Vector& v0() const { return v0_; }
  double lambda1() const { return lambda1_; }
  int lambda1_iterations() const { return lambda1_iterations_; }

  Vector apply_S(const Vector& x) const;
  Vector apply_LN(const Vector& x) const;

  // (1/2) f^T L^N f.
  double smoothness(const Vector& f) const;

  // x - v0 (v0^T x).
  Vector project_out_v0(const Vector& x) const;

 private:
  std::shared_ptr<const WeightedGraph> graph_;
  Vector inv_sqrt_d_;
  Vector v0_;
  double lambda1_ = 0.0;
  int lambda1_iterations_ = 0;
};

// Ascending eigenvalues of L^N with orthonormal eigenvectors as columns.
struct EigenPairs {
  Vector values;
  Matrix vectors;

  Index count() const { return values.size(); }
};

struct EigenOptions {
  Index dense_threshold = 512;  // dense eigendecomposition for n <= this
  double residual_tol = 1e-9;   // iterative path: max ||B x - mu x||
  int max_iterations = 50000;
};

// The p smallest eigenpairs of L^N. Each eigenvector's first component with
// magnitude above 1e-8 is made positive.
EigenPairs smallest_eigenpairs(const SpectralContext& ctx, Index p,
                               const EigenOptions& options = {});

// Dense L^N, exactly symmetric.
Matrix dense_normalized_laplacian(const SpectralContext& ctx);

// Whether W is positive semi-definite: smallest eigenvalue of W is at least
// -tol times its largest magnitude eigenvalue.
bool weights_psd(const WeightedGraph& graph, double tol = 1e-10);

}  // namespace rgc
