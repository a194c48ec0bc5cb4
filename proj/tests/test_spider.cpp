#include <gtest/gtest.h>

#include "rspider/data_io.hpp"
#include "rspider/errors.hpp"
#include "rspider/kpca.hpp"
#include "rspider/oracle.hpp"
#include "rspider/spider.hpp"

using namespace rspider;

namespace {

KPcaProblem tiny_kpca(std::size_t n, std::uint64_t seed) {
  return KPcaProblem(to_sparse_rows(synth_kpca(n, 6, 2, 0.7, seed)), 2);
}

// An rng whose next single draw from [0, n) is `index`.
Rng rng_drawing(std::size_t n, std::size_t index) {
  for (std::uint64_t seed = 0;; ++seed) {
    Rng probe(seed);
    if (sample_with_replacement(n, 1, probe).front() == index) return Rng(seed);
  }
}

}  // namespace

TEST(Spider, DrawBatchFullSumAndSampling) {
  Rng rng(1);
  EXPECT_EQ(draw_batch(5, 5, SamplingMode::kFiniteSum, rng),
            (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(draw_batch(5, 9, SamplingMode::kFiniteSum, rng).size(), 5u);
  EXPECT_EQ(draw_batch(5, 9, SamplingMode::kOnline, rng).size(), 9u);
  for (std::size_t i : draw_batch(5, 3, SamplingMode::kFiniteSum, rng)) {
    EXPECT_LT(i, 5u);
  }
}

TEST(Spider, IfoCharges) {
  const KPcaProblem p = tiny_kpca(20, 1);
  Rng rng(2);
  const ManifoldPoint x = random_point(p.manifold(), rng);
  const ManifoldPoint y = exp_map(x, random_tangent(x, rng, 0.1));
  SpiderSchedule s;
  s.s1 = 50;
  s.s2 = 3;
  IfoCounter ifo;
  SpiderState st = spider_refresh(s, x, p, rng, &ifo);
  EXPECT_EQ(ifo.count(), 20u);  // min(s1, n)
  st = spider_recurse(st, s, y, p, rng, &ifo);
  EXPECT_EQ(ifo.count(), 26u);  // + 2 |S2|
  EXPECT_EQ(st.steps_since_refresh, 1u);
  EXPECT_EQ(st.last_batch, 3u);

  s.mode = SamplingMode::kOnline;
  IfoCounter online;
  spider_refresh(s, x, p, rng, &online);
  EXPECT_EQ(online.count(), 50u);
}

TEST(Spider, FullBatchesGiveExactGradient) {
  const KPcaProblem p = tiny_kpca(30, 3);
  Rng rng(4);
  SpiderSchedule s;
  s.s1 = 30;
  s.s2 = 30;
  ManifoldPoint x = random_point(p.manifold(), rng);
  SpiderState st = spider_refresh(s, x, p, rng);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    x = exp_map(x, random_tangent(x, rng, 0.05));
    st = spider_recurse(st, s, x, p, rng);
    worst = std::max(worst, (st.v.coords() - p.full_grad(x).coords()).norm());
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Spider, RecursionIsConditionallyUnbiased) {
  const std::size_t n = 8;
  const KPcaProblem p = tiny_kpca(n, 5);
  Rng rng(6);
  const ManifoldPoint x_prev = random_point(p.manifold(), rng);
  const ManifoldPoint x_cur = exp_map(x_prev, random_tangent(x_prev, rng, 0.3));
  // An arbitrary previous estimate, not the true gradient.
  const TangentVector v_prev = random_tangent(x_prev, rng, 0.7);
  SpiderSchedule s;
  s.s2 = 1;
  const SpiderState state{v_prev, 0, 0};

  Matrix mean = Matrix::Zero(6, 2);
  for (std::size_t i = 0; i < n; ++i) {
    Rng r = rng_drawing(n, i);
    mean += spider_recurse(state, s, x_cur, p, r).v.coords();
  }
  mean /= static_cast<double>(n);
  const Matrix expected =
      oracle::exhaustive_expectation(p, x_prev, x_cur, v_prev.coords());
  EXPECT_LE((mean - expected).norm(), 1e-12);

  // With v_prev = grad f(x_prev) the expectation is grad f(x_cur).
  const SpiderState exact{p.full_grad(x_prev), 0, 0};
  Matrix mean_exact = Matrix::Zero(6, 2);
  for (std::size_t i = 0; i < n; ++i) {
    Rng r = rng_drawing(n, i);
    mean_exact += spider_recurse(exact, s, x_cur, p, r).v.coords();
  }
  mean_exact /= static_cast<double>(n);
  EXPECT_LE((mean_exact - p.full_grad(x_cur).coords()).norm(), 1e-12);
}

TEST(Spider, S2RuleOverridesFixedBatch) {
  const KPcaProblem p = tiny_kpca(20, 7);
  Rng rng(8);
  const ManifoldPoint x = random_point(p.manifold(), rng);
  SpiderSchedule s;
  s.s1 = 20;
  s.s2 = 2;
  s.s2_rule = [](double) { return std::size_t{5}; };
  IfoCounter ifo;
  SpiderState st = spider_refresh(s, x, p, rng);
  st = spider_recurse(st, s, exp_map(x, random_tangent(x, rng, 0.1)), p, rng, &ifo);
  EXPECT_EQ(ifo.count(), 10u);
}

TEST(Spider, EstimationErrorPreconditions) {
  const KPcaProblem p = tiny_kpca(10, 9);
  Rng rng(10);
  SpiderSchedule s;
  s.p = 1;
  std::vector<ManifoldPoint> traj{random_point(p.manifold(), rng)};
  EXPECT_THROW(estimation_error_mc(p, {}, s, 100, rng), ContractError);
  EXPECT_THROW(estimation_error_mc(p, traj, s, 99, rng), ContractError);
  traj.push_back(traj.front());
  traj.push_back(traj.front());
  EXPECT_THROW(estimation_error_mc(p, traj, s, 100, rng), ContractError);
}

TEST(Spider, EstimationErrorWithinBound) {
  const KPcaProblem p = tiny_kpca(40, 11);
  Rng rng(12);
  SpiderSchedule s;
  s.p = 4;
  s.s1 = 10;
  s.s2 = 3;
  std::vector<ManifoldPoint> traj{random_point(p.manifold(), rng)};
  for (int k = 0; k < 4; ++k) {
    traj.push_back(exp_map(traj.back(), random_tangent(traj.back(), rng, 0.05)));
  }
  const auto report = estimation_error_mc(p, traj, s, 400, rng);
  ASSERT_EQ(report.bound.size(), 5u);
  EXPECT_DOUBLE_EQ(report.cumulative_sq_distance[0], 0.0);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_LE(report.mean_sq_error[k], 1.05 * report.bound[k]) << "step " << k;
  }
  for (std::size_t k = 1; k < 5; ++k) {
    EXPECT_NEAR(report.cumulative_sq_distance[k] - report.cumulative_sq_distance[k - 1],
                0.05 * 0.05, 1e-12);
  }
}

TEST(Spider, FullRefreshDropsSigmaTerm) {
  const KPcaProblem p = tiny_kpca(12, 13);
  Rng rng(14);
  SpiderSchedule s;
  s.p = 1;
  s.s1 = 12;
  s.s2 = 12;
  const ManifoldPoint x = random_point(p.manifold(), rng);
  const auto report = estimation_error_mc(
      p, {x, exp_map(x, random_tangent(x, rng, 0.1))}, s, 100, rng);
  EXPECT_EQ(report.bound[0], 0.0);
  EXPECT_EQ(report.bound[1], 0.0);
  EXPECT_LE(report.mean_sq_error[1], 1e-24);
}
