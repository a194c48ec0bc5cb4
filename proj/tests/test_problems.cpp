#include <gtest/gtest.h>

#include <cmath>

#include "rspider/data_io.hpp"
#include "rspider/errors.hpp"
#include "rspider/kpca.hpp"
#include "rspider/lrmc.hpp"
#include "rspider/oracle.hpp"
#include "rspider/quadratic.hpp"
#include "rspider/smoothness.hpp"

using namespace rspider;

namespace {

KPcaProblem small_kpca(std::uint64_t seed, std::size_t n = 40, int d = 8,
                       int k = 2) {
  return KPcaProblem(to_sparse_rows(synth_kpca(n, d, k, 0.7, seed)), k);
}

}  // namespace

TEST(KPca, ComponentLossAndGradient) {
  Matrix a(1, 3);
  a << 1.0, 2.0, 2.0;
  const KPcaProblem p = KPcaProblem::from_dense(a, 1, false);
  Matrix u = Matrix::Zero(3, 1);
  u(0, 0) = 1.0;
  const ManifoldPoint x(p.manifold(), u);
  EXPECT_DOUBLE_EQ(p.component_loss(0, x), -1.0);
  // Ambient gradient -2 a a^T U.
  Matrix expected(3, 1);
  expected << -2.0, -4.0, -4.0;
  EXPECT_LE((p.component_egrad(0, x) - expected).norm(), 1e-15);
  // Riemannian gradient removes the component along U.
  Matrix riem(3, 1);
  riem << 0.0, -4.0, -4.0;
  EXPECT_LE((p.component_grad(0, x).coords() - riem).norm(), 1e-15);
}

TEST(KPca, NormalizationScalesLargestRow) {
  Matrix a(2, 2);
  a << 3.0, 4.0, 1.0, 0.0;
  const KPcaProblem p = KPcaProblem::from_dense(a, 1);
  double largest = 0.0;
  for (int i = 0; i < 2; ++i) largest = std::max(largest, p.samples().row(i).norm());
  EXPECT_DOUBLE_EQ(largest, 1.0);
}

TEST(KPca, OptimumMatchesSvdOracleAndSolution) {
  const RawDataset raw = synth_kpca(200, 10, 3, 0.6, 5);
  Matrix dense = Matrix(to_sparse_rows(raw));
  const KPcaProblem p = KPcaProblem::from_dense(dense, 3, false);
  const double f_star = *p.optimum();
  EXPECT_NEAR(f_star, oracle::kpca_optimum_svd(dense, 3), 1e-12);
  EXPECT_NEAR(p.full_loss(p.solution()), f_star, 1e-12);
  EXPECT_LE(p.full_grad(p.solution()).coords().norm(), 1e-12);
}

TEST(KPca, BatchEvaluationsMatchComponents) {
  const KPcaProblem p = small_kpca(3);
  Rng rng(1);
  const ManifoldPoint x = random_point(p.manifold(), rng);
  const std::vector<std::size_t> batch{0, 5, 5, 17, 39};
  double loss = 0.0;
  Matrix grad = Matrix::Zero(8, 2);
  for (std::size_t i : batch) {
    loss += p.component_loss(i, x);
    grad += p.component_egrad(i, x);
  }
  EXPECT_NEAR(p.batch_loss(x, batch), loss / 5.0, 1e-14);
  EXPECT_LE((p.batch_egrad(x, batch) - grad / 5.0).norm(), 1e-14);
}

TEST(KPca, GradientsMatchFiniteDifferences) {
  Rng rng(2);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const KPcaProblem p = small_kpca(s);
    const ManifoldPoint x = random_point(p.manifold(), rng);
    EXPECT_LE(oracle::gradient_check(p, x, rng).max_relative_error, 1e-5);
    EXPECT_LE(oracle::gradient_check(p, x, rng, {}, 7).max_relative_error, 1e-5);
  }
}

TEST(KPca, FullGradientMatchesOracleAndCharges) {
  const KPcaProblem p = small_kpca(4);
  Rng rng(3);
  const ManifoldPoint x = random_point(p.manifold(), rng);
  IfoCounter lib, ref;
  const TangentVector g = p.full_grad(x, &lib);
  EXPECT_LE((g.coords() - oracle::full_gradient(p, x, &ref)).norm(), 1e-13);
  EXPECT_EQ(lib.count(), 40u);
  EXPECT_EQ(ref.count(), 40u);
}

TEST(KPca, IsotropicOptimum) {
  const RawDataset raw = synth_kpca(10000, 10, 3, 1.0, 8);
  const KPcaProblem p(to_sparse_rows(raw), 3, false);
  const double expected = -3.0 * p.covariance().trace() / 10.0;
  EXPECT_NEAR(*p.optimum(), expected, 0.1 * std::abs(expected));
}

TEST(KPca, ComponentIndexChecked) {
  const KPcaProblem p = small_kpca(1);
  Rng rng(4);
  const ManifoldPoint x = random_point(p.manifold(), rng);
  EXPECT_THROW(p.component_loss(40, x), ContractError);
  EXPECT_THROW(p.batch_grad(x, {}), ContractError);
}

TEST(Lrmc, NoiseFreeFullyObservedHasZeroLossAtTruth) {
  const LrmcInstance inst = synth_lrmc(10, 30, 2, 1.0, 0.0, 6);
  const ManifoldPoint truth(inst.problem.manifold(), inst.u_star);
  EXPECT_NEAR(inst.problem.full_loss(truth), 0.0, 1e-20);
  EXPECT_LE(inst.problem.full_grad(truth).coords().norm(), 1e-10);
}

TEST(Lrmc, ColumnFitSolvesLeastSquares) {
  const LrmcInstance inst = synth_lrmc(12, 5, 3, 0.6, 0.1, 7);
  Rng rng(5);
  const ManifoldPoint x = random_point(inst.problem.manifold(), rng);
  for (std::size_t i = 0; i < inst.problem.size(); ++i) {
    const LrmcColumn& col = inst.problem.columns()[i];
    Matrix ux(col.rows.size(), 3);
    for (std::size_t r = 0; r < col.rows.size(); ++r) {
      ux.row(static_cast<Eigen::Index>(r)) = x.coords().row(col.rows[r]);
    }
    const Vector g = ux.colPivHouseholderQr().solve(col.values);
    const auto fit = inst.problem.fit_column(i, x);
    EXPECT_LE((fit.coefficients - g).norm(), 1e-10);
    EXPECT_NEAR(inst.problem.component_loss(i, x),
                (col.values - ux * g).squaredNorm(), 1e-10);
  }
}

TEST(Lrmc, GradientsMatchFiniteDifferences) {
  Rng rng(6);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const LrmcInstance inst = synth_lrmc(10, 20, 2, 0.5, 0.05, s);
    const ManifoldPoint x = random_point(inst.problem.manifold(), rng);
    EXPECT_LE(oracle::gradient_check(inst.problem, x, rng).max_relative_error, 1e-5);
    EXPECT_LE(oracle::gradient_check(inst.problem, x, rng, {}, 3).max_relative_error,
              1e-5);
  }
}

TEST(Lrmc, RankDeficientColumnWithoutRegularization) {
  // Two observed rows that coincide in U make the 2x2 system singular.
  LrmcColumn col{{0, 1}, Vector::Ones(2)};
  const LrmcProblem p(4, 2, {col}, false);
  Matrix u = Matrix::Zero(4, 2);
  u(0, 0) = 1.0 / std::sqrt(2.0);
  u(1, 0) = 1.0 / std::sqrt(2.0);
  u(2, 1) = 1.0;
  const ManifoldPoint x(p.manifold(), u);
  EXPECT_THROW(p.component_loss(0, x), SolverError);
  const LrmcProblem reg(4, 2, {col}, true);
  EXPECT_TRUE(std::isfinite(reg.component_loss(0, x)));
}

TEST(Lrmc, ReferenceOptimumRecoversTruth) {
  const LrmcInstance inst = synth_lrmc(12, 60, 2, 0.7, 0.0, 9);
  const ReferenceOptimum ref = lrmc_reference_optimum(inst.problem);
  EXPECT_LE(ref.value, 1e-12);
  EXPECT_TRUE(same_point(ref.point, ManifoldPoint(inst.problem.manifold(), inst.u_star),
                         1e-5));
}

TEST(Quadratic, ClosedFormOptimum) {
  const QuadraticProblem q = synth_quadratic(20, 5, 0.5, 3);
  const Vector x_star = *q.minimizer();
  const ManifoldPoint x(q.manifold(), x_star);
  EXPECT_NEAR(q.full_loss(x), *q.optimum(), 1e-12);
  EXPECT_LE(q.full_grad(x).coords().norm(), 1e-12);
  EXPECT_GE(q.strong_convexity(), 0.5 - 1e-12);
  // Plain check of the value: f* = -1/2 b^T A^{-1} b.
  const Vector b = q.mean_linear();
  EXPECT_NEAR(*q.optimum(), -0.5 * b.dot(q.mean_hessian().ldlt().solve(b)), 1e-12);
}

TEST(Quadratic, GradientsMatchFiniteDifferences) {
  const QuadraticProblem q = synth_quadratic(10, 4, 0.1, 1);
  Rng rng(7);
  const ManifoldPoint x = random_point(q.manifold(), rng);
  EXPECT_LE(oracle::gradient_check(q, x, rng).max_relative_error, 1e-9);
}

TEST(Smoothness, QuadraticEstimatesAreBoundedByExactConstants) {
  const QuadraticProblem q = synth_quadratic(30, 4, 0.2, 2);
  SmoothnessOptions opt;
  opt.seed = 3;
  const SmoothnessEstimates est = estimate_smoothness(q, opt);
  EXPECT_LE(est.lipschitz, q.max_component_curvature() + 1e-12);
  EXPECT_GE(est.lipschitz, 0.5 * q.max_component_curvature());
  EXPECT_GT(est.sigma, 0.0);
  ASSERT_TRUE(est.tau.has_value());
  EXPECT_LE(*est.tau, 1.0 / (2.0 * q.strong_convexity()) + 1e-9);
}

TEST(Smoothness, Deterministic) {
  const KPcaProblem p = small_kpca(2);
  SmoothnessOptions opt;
  opt.seed = 9;
  opt.sample_count = 32;
  const auto a = estimate_smoothness(p, opt);
  const auto b = estimate_smoothness(p, opt);
  EXPECT_EQ(a.lipschitz, b.lipschitz);
  EXPECT_EQ(a.sigma, b.sigma);
}
