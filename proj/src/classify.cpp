#include "rgc/classify.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

#include "rgc/cg.hpp"
#include "rgc/error.hpp"

namespace rgc {

namespace {

void check_labels(const SpectralContext& ctx, const LabelVector& labels) {
  if (labels.size() != ctx.size()) {
    std::ostringstream os;
    os << "label vector of length " << labels.size() << " for n = " << ctx.size();
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

void check_complete(const SpectralContext& ctx, const EigenPairs& eigenpairs) {
  if (eigenpairs.count() != ctx.size() ||
      eigenpairs.vectors.rows() != ctx.size()) {
    std::ostringstream os;
    os << "closed form needs all " << ctx.size() << " eigenpairs, got "
       << eigenpairs.count();
    throw Error(ErrorCode::kIncompleteBasis, os.str());
  }
}

std::string gamma_range_message(double gamma, double lambda1) {
  std::ostringstream os;
  os.precision(17);
  os << "gamma = " << gamma << " outside the valid range (0, " << lambda1
     << ")";
  return os.str();
}

void maybe_warn_conditioning(const SpectralContext& ctx, double gamma,
                             const SolverOptions& options,
                             ClassifierSolution& sol) {
  const double bound = condition_number_bound(ctx, gamma, options.psd_weights);
  if (bound > options.condition_warning) {
    std::ostringstream os;
    os << "condition number bound " << bound << " exceeds "
       << options.condition_warning;
    sol.warnings.push_back(os.str());
  }
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::kRobust: return "robust";
    case Method::kPfRobust: return "pf_robust";
    case Method::kZhou: return "zhou";
    case Method::kBelkin: return "belkin";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  if (name == "robust") return Method::kRobust;
  if (name == "pf_robust" || name == "pf") return Method::kPfRobust;
  if (name == "zhou") return Method::kZhou;
  if (name == "belkin") return Method::kBelkin;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown method '" + std::string(name) + "'");
}

LabelVector::LabelVector(Vector y) : y_(std::move(y)) {
  for (Index i = 0; i < y_.size(); ++i) {
    const double v = y_[i];
    if (v != -1.0 && v != 0.0 && v != 1.0) {
      std::ostringstream os;
      os << "label " << v << " at node " << i << " is not in {-1, 0, +1}";
      throw Error(ErrorCode::kInvalidArgument, os.str());
    }
  }
}

LabelVector LabelVector::from_ints(std::span<const int> values) {
  Vector y(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) y[static_cast<Index>(i)] = values[i];
  return LabelVector(std::move(y));
}

LabelVector LabelVector::from_pairs(
    Index n, std::span<const std::pair<Index, int>> labelled) {
  Vector y = Vector::Zero(n);
  for (const auto& [node, label] : labelled) {
    if (node < 0 || node >= n) {
      std::ostringstream os;
      os << "labelled node " << node << " outside [0, " << n << ")";
      throw Error(ErrorCode::kInvalidArgument, os.str());
    }
    y[node] = label;
  }
  return LabelVector(std::move(y));
}

std::vector<Index> LabelVector::labelled() const {
  std::vector<Index> out;
  for (Index i = 0; i < y_.size(); ++i) {
    if (y_[i] != 0.0) out.push_back(i);
  }
  return out;
}

Index LabelVector::labelled_count() const {
  return static_cast<Index>((y_.array() != 0.0).count());
}

bool LabelVector::has_both_classes() const {
  return (y_.array() > 0.0).any() && (y_.array() < 0.0).any();
}

void LabelVector::require_trainable() const {
  if (labelled_count() < 2 || !has_both_classes()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least two labels covering both classes");
  }
}

void check_robust_gamma(const SpectralContext& ctx, double gamma,
                        double margin) {
  if (!(gamma > 0.0) || !(gamma < ctx.lambda1() * (1.0 - margin))) {
    throw Error(ErrorCode::kGammaOutOfRange,
                gamma_range_message(gamma, ctx.lambda1()));
  }
}

ClassifierSolution solve_robust_gc(const SpectralContext& ctx,
                                   const LabelVector& labels, double gamma,
                                   const SolverOptions& options) {
  check_labels(ctx, labels);
  check_robust_gamma(ctx, gamma, options.gamma_margin);

  const Vector rhs = ctx.project_out_v0(labels.values());
  const double tolerance = options.rel_tol * rhs.norm();
  const auto apply = [&](const Vector& x) -> Vector {
    return ctx.apply_LN(x) / gamma - x;
  };
  const Vector& v0 = ctx.v0();
  const auto project = [&](Vector& x) { x -= v0 * v0.dot(x); };
  const int cap = options.iterations_per_node * static_cast<int>(ctx.size());
  CgResult cg = conjugate_gradient(apply, rhs, tolerance, cap, project);
  if (!cg.converged) {
    std::ostringstream os;
    os << "robust CG stopped after " << cg.iterations << " iterations with residual "
       << cg.residual << " > " << tolerance;
    throw Error(ErrorCode::kNoConvergence, os.str());
  }
  ClassifierSolution sol{std::move(cg.x), Method::kRobust, gamma, cg.residual,
                         cg.iterations, {}};
  maybe_warn_conditioning(ctx, gamma, options, sol);
  return sol;
}

ClassifierSolution solve_robust_gc_spectral(const SpectralContext& ctx,
                                            const LabelVector& labels,
                                            double gamma,
                                            const EigenPairs& eigenpairs,
                                            const SolverOptions& options) {
  check_labels(ctx, labels);
  check_robust_gamma(ctx, gamma, options.gamma_margin);
  check_complete(ctx, eigenpairs);

  const Index n = ctx.size();
  Vector coeffs = eigenpairs.vectors.transpose() * labels.values();
  coeffs[0] = 0.0;
  for (Index l = 1; l < n; ++l) {
    coeffs[l] /= eigenpairs.values[l] / gamma - 1.0;
  }
  ClassifierSolution sol{eigenpairs.vectors * coeffs, Method::kRobust, gamma,
                         0.0, 0, {}};
  const Vector rhs = ctx.project_out_v0(labels.values());
  sol.residual = (ctx.apply_LN(sol.f_star) / gamma - sol.f_star - rhs).norm();
  maybe_warn_conditioning(ctx, gamma, options, sol);
  return sol;
}

ClassifierSolution solve_pf_robust_gc(const SpectralContext& ctx,
                                      const LabelVector& labels, double eta,
                                      const SolverOptions& options) {
  if (!(eta > 0.0 && eta < 1.0)) {
    std::ostringstream os;
    os << "eta = " << eta << " outside (0, 1)";
    throw Error(ErrorCode::kGammaOutOfRange, os.str());
  }
  ClassifierSolution sol =
      solve_robust_gc(ctx, labels, eta * ctx.lambda1(), options);
  sol.method = Method::kPfRobust;
  return sol;
}

ClassifierSolution solve_zhou_gc(const SpectralContext& ctx,
                                 const LabelVector& labels, double gamma,
                                 const SolverOptions& options) {
  check_labels(ctx, labels);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kGammaOutOfRange,
                "zhou gamma must be positive, got " + std::to_string(gamma));
  }
  const Vector rhs = gamma * labels.values();
  const double tolerance = options.rel_tol * rhs.norm();
  const auto apply = [&](const Vector& x) -> Vector {
    return ctx.apply_LN(x) + gamma * x;
  };
  const int cap = options.iterations_per_node * static_cast<int>(ctx.size());
  CgResult cg = conjugate_gradient(apply, rhs, tolerance, cap);
  if (!cg.converged) {
    std::ostringstream os;
    os << "zhou CG stopped after " << cg.iterations << " iterations with residual "
       << cg.residual << " > " << tolerance;
    throw Error(ErrorCode::kNoConvergence, os.str());
  }
  return {std::move(cg.x), Method::kZhou, gamma, cg.residual, cg.iterations, {}};
}

ClassifierSolution solve_zhou_gc_spectral(const SpectralContext& ctx,
                                          const LabelVector& labels,
                                          double gamma,
                                          const EigenPairs& eigenpairs) {
  check_labels(ctx, labels);
  check_complete(ctx, eigenpairs);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kGammaOutOfRange,
                "zhou gamma must be positive, got " + std::to_string(gamma));
  }
  Vector coeffs = eigenpairs.vectors.transpose() * labels.values();
  for (Index l = 0; l < coeffs.size(); ++l) {
    coeffs[l] *= gamma / (eigenpairs.values[l] + gamma);
  }
  ClassifierSolution sol{eigenpairs.vectors * coeffs, Method::kZhou, gamma, 0.0,
                         0, {}};
  sol.residual = (ctx.apply_LN(sol.f_star) + gamma * sol.f_star -
                  gamma * labels.values())
                     .norm();
  return sol;
}

ClassifierSolution solve_belk_gc(const SpectralContext& ctx,
                                 const LabelVector& labels, Index p,
                                 const EigenPairs& eigenpairs,
                                 BelkinBasis basis) {
  check_labels(ctx, labels);
  const Index n = ctx.size();
  const Index offset = basis == BelkinBasis::kSkipNullVector ? 1 : 0;
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "p must be >= 1");
  if (p + offset > n) {
    std::ostringstream os;
    os << "p = " << p << " exceeds the available " << n - offset
       << " eigenvectors";
    throw Error(ErrorCode::kPTooLarge, os.str());
  }
  if (eigenpairs.count() < p + offset || eigenpairs.vectors.rows() != n) {
    std::ostringstream os;
    os << "belkin with p = " << p << " needs " << p + offset
       << " eigenpairs, got " << eigenpairs.count();
    throw Error(ErrorCode::kIncompleteBasis, os.str());
  }
  const std::vector<Index> labelled = labels.labelled();
  if (labelled.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "belkin needs at least one label");
  }
  const auto s = static_cast<Index>(labelled.size());
  const auto basis_block = eigenpairs.vectors.middleCols(offset, p);
  Matrix e(s, p);
  Vector c(s);
  for (Index r = 0; r < s; ++r) {
    e.row(r) = basis_block.row(labelled[r]);
    c[r] = labels.values()[labelled[r]];
  }
  // Rank-revealing complete orthogonal decomposition gives the minimum-norm
  // least-squares solution when e is rank deficient (p > s).
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(1e-10);
  cod.compute(e);
  const Vector a = cod.solve(c);
  return {basis_block * a, Method::kBelkin, static_cast<double>(p),
          (c - e * a).norm(), 0, {}};
}

std::vector<int> predict(const Vector& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.size()));
  for (Index i = 0; i < scores.size(); ++i) out[i] = scores[i] < 0.0 ? -1 : 1;
  return out;
}

std::vector<int> predict(const ClassifierSolution& solution) {
  return predict(solution.f_star);
}

double condition_number_bound(const SpectralContext& ctx, double gamma,
                              bool psd_weights) {
  if (!(gamma > 0.0) || !(gamma < ctx.lambda1())) {
    throw Error(ErrorCode::kGammaOutOfRange,
                gamma_range_message(gamma, ctx.lambda1()));
  }
  const double c = psd_weights ? 1.0 : 2.0;
  return (c - gamma) / (ctx.lambda1() - gamma);
}

double robust_objective(const SpectralContext& ctx, const LabelVector& labels,
                        const Vector& f, double gamma) {
  check_labels(ctx, labels);
  return ctx.smoothness(f) - 0.5 * gamma * (f + labels.values()).squaredNorm();
}

}  // namespace rgc
