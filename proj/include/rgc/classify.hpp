#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rgc/spectral.hpp"

namespace rgc {

enum class Method { kRobust, kPfRobust, kZhou, kBelkin };

const char* to_string(Method method);
// Accepts robust, pf_robust (or pf), zhou, belkin.
Method method_from_string(std::string_view name);

// Label vector y with entries in {-1, 0, +1}; nonzero entries form the
// labelled set.
class LabelVector {
 public:
  LabelVector() = default;
  explicit LabelVector(Vector y);

  static LabelVector from_ints(std::span<const int> values);
  static LabelVector from_pairs(Index n,
                                std::span<const std::pair<Index, int>> labelled);

  Index size() const { return y_.size(); }
  const Vector& values() const { return y_; }
  int operator[](Index i) const { return static_cast<int>(y_[i]); }

  std::vector<Index> labelled() const;
  Index labelled_count() const;
  bool has_both_classes() const;

  // At least two labels and both classes present; throws InvalidArgument.
  void require_trainable() const;

 private:
  Vector y_;
};

struct ClassifierSolution {
  Vector f_star;
  Method method = Method::kRobust;
  double param = 0.0;     // gamma for robust/pf/zhou, p for belkin
  double residual = 0.0;  // linear-system or least-squares residual norm
  int iterations = 0;
  std::vector<std::string> warnings;
};

struct SolverOptions {
  double rel_tol = 1e-10;
  int iterations_per_node = 10;
  // Robust gamma must stay below lambda1 * (1 - gamma_margin).
  double gamma_margin = 1e-9;
  // Selects c = 1 instead of c = 2 in the conditioning bound used for warnings.
  bool psd_weights = false;
  double condition_warning = 1e8;
};

// Throws GammaOutOfRange unless 0 < gamma < lambda1 (1 - margin).
void check_robust_gamma(const SpectralContext& ctx, double gamma,
                        double margin = 1e-9);

// Solves (L^N / gamma - I) f = P0 y on v0-perp by projected CG.
ClassifierSolution solve_robust_gc(const SpectralContext& ctx,
                                   const LabelVector& labels, double gamma,
                                   const SolverOptions& options = {});

// Closed form over a complete eigenbasis:
// f = sum_{l >= 1} (v_l^T y) / (lambda_l / gamma - 1) v_l.
ClassifierSolution solve_robust_gc_spectral(const SpectralContext& ctx,
                                            const LabelVector& labels,
                                            double gamma,
                                            const EigenPairs& eigenpairs,
                                            const SolverOptions& options = {});

// gamma = eta * lambda1.
ClassifierSolution solve_pf_robust_gc(const SpectralContext& ctx,
                                      const LabelVector& labels,
                                      double eta = 0.9,
                                      const SolverOptions& options = {});

// Solves (L^N + gamma I) f = gamma y by CG.
ClassifierSolution solve_zhou_gc(const SpectralContext& ctx,
                                 const LabelVector& labels, double gamma,
                                 const SolverOptions& options = {});

// f = sum_l gamma (v_l^T y) / (lambda_l + gamma) v_l over a complete basis.
ClassifierSolution solve_zhou_gc_spectral(const SpectralContext& ctx,
                                          const LabelVector& labels,
                                          double gamma,
                                          const EigenPairs& eigenpairs);

enum class BelkinBasis {
  kFromNullVector,  // v_0 .. v_{p-1}
  kSkipNullVector,  // v_1 .. v_p
};

// Minimum-norm least-squares fit of the labels by p Laplacian eigenvectors
// (singular values below 1e-10 of the largest are dropped).
ClassifierSolution solve_belk_gc(const SpectralContext& ctx,
                                 const LabelVector& labels, Index p,
                                 const EigenPairs& eigenpairs,
                                 BelkinBasis basis = BelkinBasis::kFromNullVector);

// Elementwise sign with sign(0) = +1.
std::vector<int> predict(const Vector& scores);
std::vector<int> predict(const ClassifierSolution& solution);

// (c - gamma) / (lambda1 - gamma), c = 1 for PSD weights and 2 otherwise.
double condition_number_bound(const SpectralContext& ctx, double gamma,
                              bool psd_weights);

// (1/2) f^T L^N f - (gamma / 2) ||f + y||^2.
double robust_objective(const SpectralContext& ctx, const LabelVector& labels,
                        const Vector& f, double gamma);

}  // namespace rgc
