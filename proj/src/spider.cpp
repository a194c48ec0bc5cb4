#include "rspider/spider.hpp"

#include "rspider/errors.hpp"

namespace rspider {
namespace {

std::size_t recursion_batch(const SpiderSchedule& schedule,
                            const SpiderState& state) {
  const std::size_t size =
      schedule.s2_rule ? schedule.s2_rule(norm(state.v)) : schedule.s2;
  return std::max<std::size_t>(size, 1);
}

bool uses_full_sum(const SpiderSchedule& schedule, std::size_t size,
                   std::size_t n) {
  return schedule.mode == SamplingMode::kFiniteSum && size >= n;
}

}  // namespace

std::vector<std::size_t> draw_batch(std::size_t n, std::size_t size,
                                    SamplingMode mode, Rng& rng) {
  if (mode == SamplingMode::kFiniteSum && size >= n) return all_indices(n);
  return sample_with_replacement(n, std::max<std::size_t>(size, 1), rng);
}

SpiderState spider_refresh(const SpiderSchedule& schedule,
                           const ManifoldPoint& x, const Problem& problem,
                           Rng& rng, IfoCounter* ifo) {
  const auto batch = draw_batch(problem.size(), schedule.s1, schedule.mode, rng);
  SpiderState state{problem.batch_grad(x, batch, ifo), 0, batch.size()};
  return state;
}

SpiderState spider_recurse(const SpiderState& state,
                           const SpiderSchedule& schedule,
                           const ManifoldPoint& x_cur, const Problem& problem,
                           Rng& rng, IfoCounter* ifo, TransportMode mode) {
  const ManifoldPoint& x_prev = state.v.base();
  const std::size_t size = recursion_batch(schedule, state);
  const auto batch = draw_batch(problem.size(), size, schedule.mode, rng);

  TangentVector g_cur = problem.batch_grad(x_cur, batch, ifo);
  TangentVector g_prev = problem.batch_grad(x_prev, batch, ifo);
  g_prev -= state.v;
  g_cur -= transport(x_prev, x_cur, g_prev, mode);
  return SpiderState{std::move(g_cur), state.steps_since_refresh + 1,
                     batch.size()};
}

EstimationErrorReport estimation_error_mc(
    const Problem& problem, const std::vector<ManifoldPoint>& trajectory,
    const SpiderSchedule& schedule, std::size_t trials, Rng& rng,
    std::optional<SmoothnessEstimates> estimates) {
  if (trajectory.empty()) {
    throw ContractError("estimation_error_mc: empty trajectory");
  }
  if (trajectory.size() > schedule.p + 1) {
    throw ContractError("estimation_error_mc: trajectory longer than p + 1");
  }
  if (trials < 100) {
    throw ContractError("estimation_error_mc: need at least 100 trials");
  }
  if (!estimates) {
    SmoothnessOptions opts;
    opts.seed = rng();
    opts.anchors = trajectory;
    estimates = estimate_smoothness(problem, opts);
  }

  const std::size_t steps = trajectory.size();
  const std::size_t n = problem.size();
  EstimationErrorReport report;
  report.estimates = *estimates;
  report.mean_sq_error.assign(steps, 0.0);
  report.bound.assign(steps, 0.0);
  report.cumulative_sq_distance.assign(steps, 0.0);

  std::vector<Matrix> truth;
  truth.reserve(steps);
  for (const ManifoldPoint& x : trajectory) {
    truth.push_back(problem.full_grad(x).coords());
  }
  for (std::size_t k = 1; k < steps; ++k) {
    const double d = distance(trajectory[k - 1], trajectory[k]);
    report.cumulative_sq_distance[k] =
        report.cumulative_sq_distance[k - 1] + d * d;
  }

  for (std::size_t trial = 0; trial < trials; ++trial) {
    SpiderState state = spider_refresh(schedule, trajectory[0], problem, rng);
    report.mean_sq_error[0] += (state.v.coords() - truth[0]).squaredNorm();
    for (std::size_t k = 1; k < steps; ++k) {
      state = spider_recurse(state, schedule, trajectory[k], problem, rng);
      report.mean_sq_error[k] += (state.v.coords() - truth[k]).squaredNorm();
    }
  }
  for (double& e : report.mean_sq_error) e /= static_cast<double>(trials);

  const double sigma2 = estimates->sigma * estimates->sigma;
  const double lip2 = estimates->lipschitz * estimates->lipschitz;
  const double refresh_term =
      uses_full_sum(schedule, schedule.s1, n)
          ? 0.0
          : sigma2 / static_cast<double>(std::max<std::size_t>(schedule.s1, 1));
  const bool recursion_exact =
      !schedule.s2_rule && uses_full_sum(schedule, schedule.s2, n);
  for (std::size_t k = 0; k < steps; ++k) {
    const double recursion_term =
        recursion_exact ? 0.0
                        : lip2 / static_cast<double>(std::max<std::size_t>(
                                     schedule.s2, 1)) *
                              report.cumulative_sq_distance[k];
    report.bound[k] = refresh_term + recursion_term;
  }
  return report;
}

}  // namespace rspider
