#include "rgc/oos.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "rgc/error.hpp"
#include "rgc/io.hpp"

namespace rgc {

OosModel::OosModel(PointCloud points, KernelSpec kernel, Vector train_degrees,
                   Vector f_star, double gamma, DegreeConvention convention)
    : points_(std::move(points)),
      kernel_(kernel),
      train_degrees_(std::move(train_degrees)),
      f_star_(std::move(f_star)),
      gamma_(gamma),
      convention_(convention) {
  kernel_.validate();
  const Index n = points_.size();
  if (n < 1 || points_.dim() < 1 || !points_.coords.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "training points must be finite");
  }
  if (train_degrees_.size() != n || f_star_.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "degrees and scores must match the number of training points");
  }
  if (!(train_degrees_.array() > 0.0).all()) {
    throw Error(ErrorCode::kInvalidArgument, "training degrees must be positive");
  }
  // gamma < lambda1 <= 1 holds for every PSD kernel graph.
  if (!(gamma_ > 0.0 && gamma_ < 1.0)) {
    std::ostringstream os;
    os << "gamma = " << gamma_ << " outside (0, 1)";
    throw Error(ErrorCode::kGammaOutOfRange, os.str());
  }
}

OosModel OosModel::train(const PointCloud& points, const KernelSpec& kernel,
                         const LabelVector& labels, double eta,
                         DegreeConvention convention) {
  SpectralContext ctx(kernel_graph(points, kernel));
  ClassifierSolution sol = solve_pf_robust_gc(ctx, labels, eta);
  return OosModel(points, kernel, ctx.graph().degrees(), std::move(sol.f_star),
                  sol.param, convention);
}

OosModel OosModel::scaled(double alpha) const {
  OosModel copy = *this;
  copy.f_star_ *= alpha;
  return copy;
}

void OosModel::check_dim(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  if (x.size() != points_.dim()) {
    std::ostringstream os;
    os << "query point of dimension " << x.size() << ", model dimension "
       << points_.dim();
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

double OosModel::degree(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  check_dim(x);
  double d = 0.0;
  for (Index j = 0; j < points_.size(); ++j) d += kernel_(x, points_.point(j));
  if (convention_ == DegreeConvention::kSelfInclusive) d += kernel_.self_value();
  return d;
}

bool OosModel::feasible(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  return degree(x) * (1.0 - gamma_) - kernel_.self_value() > kFeasibilityMargin;
}

double OosModel::score(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  check_dim(x);
  const Index n = points_.size();
  Vector k(n);
  double d = 0.0;
  for (Index j = 0; j < n; ++j) {
    k[j] = kernel_(x, points_.point(j));
    d += k[j];
  }
  if (convention_ == DegreeConvention::kSelfInclusive) d += kernel_.self_value();
  const double self = kernel_.self_value();
  if (!(d * (1.0 - gamma_) - self > kFeasibilityMargin)) {
    std::ostringstream os;
    os.precision(17);
    os << "d_x = " << d << " does not exceed k(x,x)/(1 - gamma) = "
       << self / (1.0 - gamma_);
    throw Error(ErrorCode::kOutOfRange, os.str());
  }
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    sum += k[i] / std::sqrt(d * train_degrees_[i]) * f_star_[i];
  }
  return sum / (1.0 - gamma_ - self / d);
}

OosLabel OosModel::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  if (!feasible(x)) return OosLabel::kOutOfRange;
  return score(x) < 0.0 ? OosLabel::kNegative : OosLabel::kPositive;
}

std::vector<GridCell> evaluate_grid(const OosModel& model,
                                    const GridWindow& window, int resolution,
                                    int threads) {
  if (resolution < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid resolution must be >= 1");
  }
  if (model.points().dim() != 2) {
    throw Error(ErrorCode::kDimensionMismatch, "grid evaluation needs 2-D points");
  }
  const auto coordinate = [resolution](double lo, double hi, int k) {
    if (resolution == 1) return 0.5 * (lo + hi);
    return lo + (hi - lo) * static_cast<double>(k) / (resolution - 1);
  };
  const auto res = static_cast<std::size_t>(resolution);
  std::vector<GridCell> cells(res * res);
  std::atomic<int> next_row{0};
  const auto worker = [&] {
    Eigen::RowVector2d x;
    for (int row = next_row++; row < resolution; row = next_row++) {
      const double x1 = coordinate(window.x1_min, window.x1_max, row);
      for (int col = 0; col < resolution; ++col) {
        GridCell& cell = cells[static_cast<std::size_t>(row) * res +
                               static_cast<std::size_t>(col)];
        cell.x0 = coordinate(window.x0_min, window.x0_max, col);
        cell.x1 = x1;
        x << cell.x0, cell.x1;
        if (model.feasible(x)) {
          cell.score = model.score(x);
          cell.label = cell.score < 0.0 ? -1 : 1;
        }
      }
    }
  };
  const int workers = std::clamp(threads, 1, resolution);
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return cells;
}

void write_grid_csv(std::ostream& os, const std::vector<GridCell>& cells) {
  os << "x0,x1,score,label\n";
  for (const GridCell& c : cells) {
    os << format_double(c.x0) << ',' << format_double(c.x1) << ','
       << format_double(c.score) << ',' << c.label << '\n';
  }
}

}  // namespace rgc
