#pragma once

#include <iosfwd>
#include <vector>

#include "rgc/classify.hpp"

namespace rgc {

// How the degree of an unseen point is formed.
enum class DegreeConvention {
  kLiteral,        // d_x = sum_j k(x, x_j) over training points only
  kSelfInclusive,  // d_x additionally counts k(x, x), like in-sample degrees
};

enum class OosLabel : int { kNegative = -1, kOutOfRange = 0, kPositive = 1 };

// Everything needed to score unseen points from a RobustGC solution trained
// on a kernel graph. Immutable; scoring is pure.
class OosModel {
 public:
  OosModel(PointCloud points, KernelSpec kernel, Vector train_degrees,
           Vector f_star, double gamma,
           DegreeConvention convention = DegreeConvention::kLiteral);

  // Builds the kernel graph, solves PF-RobustGC with gamma = eta * lambda1,
  // and keeps what scoring needs.
  static OosModel train(const PointCloud& points, const KernelSpec& kernel,
                        const LabelVector& labels, double eta = 0.9,
                        DegreeConvention convention = DegreeConvention::kLiteral);

  const PointCloud& points() const { return points_; }
  const KernelSpec& kernel() const { return kernel_; }
  const Vector& train_degrees() const { return train_degrees_; }
  const Vector& f_star() const { return f_star_; }
  double gamma() const { return gamma_; }
  DegreeConvention convention() const { return convention_; }

  // Copy with f_star scaled by alpha.
  OosModel scaled(double alpha) const;

  double degree(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

  // d_x (1 - gamma) - k(x, x) > 1e-12.
  bool feasible(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

  // f_x = sum_i S_xi f_i / (1 - gamma - k(x, x) / d_x) with
  // S_xi = k(x, x_i) / sqrt(d_x d_i). Throws OutOfRange when infeasible.
  double score(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

  OosLabel predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

 private:
  void check_dim(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

  PointCloud points_;
  KernelSpec kernel_;
  Vector train_degrees_;
  Vector f_star_;
  double gamma_;
  DegreeConvention convention_;
};

inline constexpr double kFeasibilityMargin = 1e-12;

struct GridWindow {
  double x0_min = -3.1;
  double x0_max = 3.1;
  double x1_min = -3.1;
  double x1_max = 3.1;
};

struct GridCell {
  double x0 = 0.0;
  double x1 = 0.0;
  double score = 0.0;  // 0 when out of range
  int label = 0;       // -1, +1, or 0 for out of range
};

// resolution x resolution regular grid spanning the window (endpoints
// included), x1-major then x0. A resolution of 1 evaluates the window centre.
// Rows are split across `threads` workers; results do not depend on the
// thread count.
std::vector<GridCell> evaluate_grid(const OosModel& model,
                                    const GridWindow& window, int resolution,
                                    int threads = 1);

// Header x0,x1,score,label; numbers with 17 significant digits.
void write_grid_csv(std::ostream& os, const std::vector<GridCell>& cells);

}  // namespace rgc
