#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rgc/cg.hpp"
#include "rgc/classify.hpp"
#include "support.hpp"

using namespace rgc;

namespace {

// Spectral-formula oracle built from an independent dense eigendecomposition.
Vector oracle_robust(const WeightedGraph& g, const Vector& y, double gamma) {
  const auto s = testing::oracle_spectrum(g);
  Vector f = Vector::Zero(y.size());
  for (Index l = 1; l < y.size(); ++l) {
    const double yl = s.vectors.col(l).dot(y);
    f += yl / (s.values[l] / gamma - 1.0) * s.vectors.col(l);
  }
  return f;
}

WeightedGraph two_cliques(double bridge) {
  std::vector<Edge> e;
  for (Index base : {0, 4}) {
    for (Index i = 0; i < 4; ++i) {
      for (Index j = i + 1; j < 4; ++j) e.push_back({base + i, base + j, 1.0});
    }
  }
  e.push_back({3, 4, bridge});
  return WeightedGraph::from_edge_list(8, e);
}

LabelVector chain_labels() {
  const std::vector<std::pair<Index, int>> pairs{{2, 1}, {17, -1}};
  return LabelVector::from_pairs(20, pairs);
}

void check_chain_split(const Vector& f) {
  for (Index i = 0; i < 10; ++i) CHECK(f[i] > 0);
  for (Index i = 10; i < 20; ++i) CHECK(f[i] < 0);
}

}  // namespace

TEST_CASE("label vector") {
  const std::vector<int> v{1, 0, -1, 0};
  auto y = LabelVector::from_ints(v);
  CHECK(y.labelled() == std::vector<Index>{0, 2});
  CHECK(y.has_both_classes());
  CHECK_NOTHROW(y.require_trainable());
  Vector bad(2);
  bad << 0.5, 1;
  CHECK_THROWS_AS(LabelVector{bad}, Error);
  const std::vector<int> one{1, 0, 0};
  CHECK_THROWS_AS(LabelVector::from_ints(one).require_trainable(), Error);
  CHECK(method_from_string("pf") == Method::kPfRobust);
  CHECK(method_from_string("pf_robust") == Method::kPfRobust);
  CHECK_THROWS_AS(method_from_string("svm"), Error);
}

TEST_CASE("conjugate gradient with projection") {
  const Matrix A = testing::oracle_LN(testing::random_graph(10, testing::GraphKind::kKernel, 2)) +
                   0.5 * Matrix::Identity(10, 10);
  const Vector b = testing::random_labels(10, 4);
  auto r = conjugate_gradient([&](const Vector& x) -> Vector { return A * x; }, b, 1e-12, 200);
  CHECK(r.converged);
  CHECK((A * r.x - b).norm() <= 1e-12);
  CHECK(r.residual == doctest::Approx((A * r.x - b).norm()).epsilon(1e-6));
}

TEST_CASE("robust: zero labels give zero solution") {
  SpectralContext ctx(testing::random_graph(10, testing::GraphKind::kSbm, 1));
  const LabelVector zero(Vector::Zero(10));
  auto sol = solve_robust_gc(ctx, zero, 0.5 * ctx.lambda1());
  CHECK(sol.f_star.norm() == 0.0);
}

TEST_CASE("robust: two cliques split") {
  SpectralContext ctx(two_cliques(0.1));
  const std::vector<std::pair<Index, int>> pairs{{0, 1}, {7, -1}};
  const auto y = LabelVector::from_pairs(8, pairs);
  auto sol = solve_robust_gc(ctx, y, 0.5 * ctx.lambda1());
  const auto pred = predict(sol);
  for (Index i = 0; i < 4; ++i) CHECK(pred[i] == 1);
  for (Index i = 4; i < 8; ++i) CHECK(pred[i] == -1);
  CHECK((sol.f_star - oracle_robust(ctx.graph(), y.values(), 0.5 * ctx.lambda1()))
            .cwiseAbs()
            .maxCoeff() < 1e-8);
}

TEST_CASE("robust: chain splits at the weak link") {
  SpectralContext ctx(chain_graph(10, 0.1).graph);
  const auto y = chain_labels();
  auto sol = solve_robust_gc(ctx, y, 0.5 * ctx.lambda1());
  check_chain_split(sol.f_star);
  CHECK(std::abs(sol.f_star.dot(ctx.v0())) < 1e-10);
  const auto pred = predict(sol);
  CHECK(std::count(pred.begin(), pred.end(), 1) == 10);
  auto pf = solve_pf_robust_gc(ctx, y, 0.5);
  check_chain_split(pf.f_star);
}

TEST_CASE("robust: CG agrees with the closed form") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    SpectralContext ctx(testing::random_graph(8, static_cast<testing::GraphKind>(seed % 3), seed));
    const LabelVector y(testing::random_labels(8, seed));
    const double gamma = 0.7 * ctx.lambda1();
    auto cg = solve_robust_gc(ctx, y, gamma);
    auto sp = solve_robust_gc_spectral(ctx, y, gamma, smallest_eigenpairs(ctx, 8));
    CHECK((cg.f_star - sp.f_star).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((cg.f_star - oracle_robust(ctx.graph(), y.values(), gamma)).cwiseAbs().maxCoeff() <
          1e-8);
  }
}

TEST_CASE("robust: small gamma approaches the pseudo-inverse direction") {
  SpectralContext ctx(testing::random_graph(8, testing::GraphKind::kKernel, 3));
  const LabelVector y(testing::random_labels(8, 3));
  const auto s = testing::oracle_spectrum(ctx.graph());
  Vector pinv = Vector::Zero(8);
  for (Index l = 1; l < 8; ++l) pinv += s.vectors.col(l).dot(y.values()) / s.values[l] * s.vectors.col(l);
  const double gamma = 1e-6 * ctx.lambda1();
  auto sol = solve_robust_gc_spectral(ctx, y, gamma, smallest_eigenpairs(ctx, 8));
  CHECK((sol.f_star / gamma - pinv).norm() < 1e-4 * pinv.norm());
}

TEST_CASE("robust: two-node substitution") {
  const std::vector<Edge> e{{0, 1, 1.0}};
  SpectralContext ctx(WeightedGraph::from_edge_list(2, e));
  const std::vector<int> v{1, -1};
  const auto y = LabelVector::from_ints(v);
  auto eig = smallest_eigenpairs(ctx, 2);
  auto sol = solve_robust_gc_spectral(ctx, y, 1.0, eig);
  const double y1 = eig.vectors.col(1).dot(y.values());
  CHECK((sol.f_star - y1 * eig.vectors.col(1)).norm() < 1e-12);
  CHECK_THROWS_AS(solve_robust_gc_spectral(ctx, y, 1.0, smallest_eigenpairs(ctx, 1)), Error);
}

TEST_CASE("robust: gamma domain") {
  SpectralContext ctx(chain_graph(10, 0.1).graph);
  const auto y = chain_labels();
  for (double g : {0.0, -1.0, ctx.lambda1(), 1.01 * ctx.lambda1(), 99.0}) {
    try {
      solve_robust_gc(ctx, y, g);
      FAIL("expected GammaOutOfRange");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kGammaOutOfRange);
    }
  }
  CHECK_THROWS_AS(solve_pf_robust_gc(ctx, y, 1.0), Error);
}

TEST_CASE("pf delegates to robust at eta * lambda1") {
  SpectralContext ctx(testing::random_graph(14, testing::GraphKind::kSbm, 2));
  const LabelVector y(testing::random_labels(14, 5));
  auto pf = solve_pf_robust_gc(ctx, y);
  auto rb = solve_robust_gc(ctx, y, 0.9 * ctx.lambda1());
  CHECK((pf.f_star - rb.f_star).norm() == 0.0);
  CHECK(pf.method == Method::kPfRobust);
  CHECK(pf.param == 0.9 * ctx.lambda1());
}

TEST_CASE("zhou") {
  SpectralContext ctx(testing::random_graph(8, testing::GraphKind::kKnn, 7));
  const LabelVector y(testing::random_labels(8, 7));
  SUBCASE("zero labels") {
    CHECK(solve_zhou_gc(ctx, LabelVector(Vector::Zero(8)), 1.0).f_star.norm() == 0.0);
  }
  SUBCASE("large gamma reproduces the labels") {
    auto sol = solve_zhou_gc(ctx, y, 1e8);
    CHECK((sol.f_star - y.values()).cwiseAbs().maxCoeff() <= 1e-6);
  }
  SUBCASE("dense direct solve") {
    const Matrix A = testing::oracle_LN(ctx.graph()) + Matrix::Identity(8, 8);
    const Vector expect = A.ldlt().solve(y.values());
    auto sol = solve_zhou_gc(ctx, y, 1.0);
    CHECK((sol.f_star - expect).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(sol.residual <= 1e-10 * y.values().norm());
    auto sp = solve_zhou_gc_spectral(ctx, y, 1.0, smallest_eigenpairs(ctx, 8));
    CHECK((sp.f_star - expect).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(solve_zhou_gc(ctx, y, 0.0), Error);
  }
}

TEST_CASE("belkin") {
  SUBCASE("p = 1 is a scaled null vector") {
    SpectralContext ctx(testing::random_graph(10, testing::GraphKind::kKernel, 8));
    const LabelVector y(testing::random_labels(10, 8));
    auto eig = smallest_eigenpairs(ctx, 1);
    auto sol = solve_belk_gc(ctx, y, 1, eig);
    const Vector v0 = eig.vectors.col(0);
    double num = 0.0, den = 0.0;
    for (Index i : y.labelled()) {
      num += y[i] * v0[i];
      den += v0[i] * v0[i];
    }
    CHECK((sol.f_star - num / den * v0).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("p = s interpolates") {
    SpectralContext ctx(testing::random_graph(10, testing::GraphKind::kSbm, 9));
    const std::vector<std::pair<Index, int>> pairs{{1, 1}, {4, -1}, {8, 1}};
    const auto y = LabelVector::from_pairs(10, pairs);
    auto sol = solve_belk_gc(ctx, y, 3, smallest_eigenpairs(ctx, 3));
    for (const auto& [i, c] : pairs) CHECK(std::abs(sol.f_star[i] - c) < 1e-9);
  }
  SUBCASE("chain with two eigenvectors") {
    SpectralContext ctx(chain_graph(10, 0.1).graph);
    const auto y = chain_labels();
    auto eig = smallest_eigenpairs(ctx, 2);
    auto sol = solve_belk_gc(ctx, y, 2, eig);
    Matrix E(2, 2);
    E << eig.vectors(2, 0), eig.vectors(2, 1), eig.vectors(17, 0), eig.vectors(17, 1);
    const Vector a = E.fullPivLu().solve(Eigen::Vector2d(1, -1));
    CHECK((sol.f_star - eig.vectors * a).cwiseAbs().maxCoeff() < 1e-10);
    check_chain_split(sol.f_star);
  }
  SUBCASE("errors") {
    SpectralContext ctx(chain_graph(3, 1.0).graph);
    const std::vector<std::pair<Index, int>> pairs{{0, 1}, {5, -1}};
    const auto y = LabelVector::from_pairs(6, pairs);
    CHECK_THROWS_AS(solve_belk_gc(ctx, y, 7, smallest_eigenpairs(ctx, 6)), Error);
    CHECK_THROWS_AS(solve_belk_gc(ctx, y, 3, smallest_eigenpairs(ctx, 2)), Error);
    CHECK_THROWS_AS(solve_belk_gc(ctx, y, 6, smallest_eigenpairs(ctx, 6),
                                  BelkinBasis::kSkipNullVector),
                    Error);
  }
}

TEST_CASE("predict") {
  Vector f(3);
  f << 0.3, -2, 0;
  CHECK(predict(f) == std::vector<int>{1, -1, 1});
  CHECK(predict(Vector(-f)) == std::vector<int>{-1, 1, 1});
}

TEST_CASE("condition number bound") {
  const std::vector<Edge> e{{0, 1, 1.0}};
  SpectralContext two(WeightedGraph::from_edge_list(2, e));
  CHECK(condition_number_bound(two, 1.0, false) == doctest::Approx(1.0));
  SpectralContext ctx(testing::random_graph(12, testing::GraphKind::kKernel, 4));
  double prev = 0.0;
  for (double t : {0.1, 0.5, 0.9, 0.99, 0.999}) {
    const double b = condition_number_bound(ctx, t * ctx.lambda1(), true);
    CHECK(b > prev);
    prev = b;
  }
  const auto s = testing::oracle_spectrum(ctx.graph());
  const double gamma = 0.9 * ctx.lambda1();
  const double lo = s.values[1] / gamma - 1.0;
  const double hi = s.values[11] / gamma - 1.0;
  CHECK(hi / lo <= condition_number_bound(ctx, gamma, weights_psd(ctx.graph())) + 1e-8);
}

TEST_CASE("objective is minimized by the solution") {
  SpectralContext ctx(testing::random_graph(10, testing::GraphKind::kSbm, 12));
  const LabelVector y(testing::random_labels(10, 12));
  const double gamma = 0.6 * ctx.lambda1();
  auto sol = solve_robust_gc(ctx, y, gamma);
  const double best = robust_objective(ctx, y, sol.f_star, gamma);
  for (std::uint64_t k = 0; k < 5; ++k) {
    const Vector d = ctx.project_out_v0(testing::random_labels(10, 100 + k));
    CHECK(robust_objective(ctx, y, sol.f_star + 0.01 * d, gamma) > best);
  }
}
