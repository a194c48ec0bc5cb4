#include <algorithm>
#include <bit>
#include <cmath>

#include "rspider/errors.hpp"
#include "rspider/optimizers.hpp"
#include "run_monitor.hpp"

namespace rspider {

RunTrace run_rsgd(const Problem& problem, const ManifoldPoint& x0,
                  const RsgdConfig& config) {
  if (!(config.c > 0.0) || config.lambda < 0.0) {
    throw ContractError("rsgd: need c > 0 and lambda >= 0");
  }
  RunTrace trace;
  detail::RunMonitor monitor(problem, config.run, trace);
  Rng rng(config.seed);
  ManifoldPoint x = x0;
  if (!monitor.reach(0, x)) {
    return monitor.finish(x, 0, TerminationReason::kNumericFailure);
  }
  for (std::size_t k = 0;; ++k) {
    if (k >= config.max_iters) {
      return monitor.finish(x, k, TerminationReason::kMaxIters);
    }
    if (monitor.budget_exhausted()) {
      return monitor.finish(x, k, TerminationReason::kIfoBudget);
    }
    const auto batch =
        draw_batch(problem.size(), config.batch, config.mode, rng);
    const TangentVector g = problem.batch_grad(x, batch, monitor.ifo());
    const double gn = norm(g);
    const double eta = config.c / (1.0 + static_cast<double>(k) * config.lambda);
    if (!monitor.annotate(k, gn, eta * gn)) {
      return monitor.finish(x, k, TerminationReason::kNumericFailure);
    }
    x = monitor.move(k, x, (-eta) * g, eta * gn, g);
    if (!monitor.reach(k + 1, x)) {
      return monitor.finish(x, k + 1, TerminationReason::kNumericFailure);
    }
  }
}

TangentVector svrg_direction(const Problem& problem, const ManifoldPoint& x,
                             const TangentVector& snapshot_full_grad,
                             Batch batch, IfoCounter* ifo, TransportMode mode) {
  const ManifoldPoint& snapshot = snapshot_full_grad.base();
  TangentVector g = problem.batch_grad(x, batch, ifo);
  TangentVector correction = problem.batch_grad(snapshot, batch, ifo);
  correction -= snapshot_full_grad;
  g -= transport(snapshot, x, correction, mode);
  return g;
}

RunTrace run_rsvrg(const Problem& problem, const ManifoldPoint& x0,
                   const RsvrgConfig& config) {
  if (config.epoch_len == 0) throw ContractError("rsvrg: epoch_len must be >= 1");
  if (!(config.rate > 0.0)) throw ContractError("rsvrg: rate must be positive");
  RunTrace trace;
  detail::RunMonitor monitor(problem, config.run, trace);
  Rng rng(config.seed);
  ManifoldPoint x = x0;
  std::optional<TangentVector> snapshot_grad;
  if (!monitor.reach(0, x)) {
    return monitor.finish(x, 0, TerminationReason::kNumericFailure);
  }
  for (std::size_t k = 0;; ++k) {
    if (k >= config.max_iters) {
      return monitor.finish(x, k, TerminationReason::kMaxIters);
    }
    if (monitor.budget_exhausted()) {
      return monitor.finish(x, k, TerminationReason::kIfoBudget);
    }
    std::optional<TangentVector> v;
    if (k % config.epoch_len == 0) {
      snapshot_grad = problem.full_grad(x, monitor.ifo());
      v = *snapshot_grad;
    } else {
      const auto batch =
          draw_batch(problem.size(), config.batch, config.mode, rng);
      v = svrg_direction(problem, x, *snapshot_grad, batch, monitor.ifo(),
                         config.run.transport);
    }
    const double vn = norm(*v);
    if (!monitor.annotate(k, vn, config.rate * vn)) {
      return monitor.finish(x, k, TerminationReason::kNumericFailure);
    }
    x = monitor.move(k, x, (-config.rate) * *v, config.rate * vn, *v);
    if (!monitor.reach(k + 1, x)) {
      return monitor.finish(x, k + 1, TerminationReason::kNumericFailure);
    }
  }
}

RunTrace run_rsrg(const Problem& problem, const ManifoldPoint& x0,
                  const RsrgConfig& config) {
  if (config.epoch_len == 0) throw ContractError("rsrg: epoch_len must be >= 1");
  if (!config.adaptive && !(config.rate > 0.0)) {
    throw ContractError("rsrg: rate must be positive");
  }
  if (config.adaptive && !(config.adaptive->alpha > 0.0)) {
    throw ContractError("rsrg: adaptive alpha must be positive");
  }
  RunTrace trace;
  detail::RunMonitor monitor(problem, config.run, trace);

  const std::size_t m = config.epoch_len;
  detail::SpiderLoop loop;
  loop.schedule.p = m;
  loop.schedule.s1 = std::max<std::size_t>(
      config.refresh_batch.value_or(problem.size()), 1);
  loop.schedule.s2 = std::max<std::size_t>(config.batch, 1);
  loop.schedule.mode = config.mode;
  if (config.plus_variant) {
    // Restarts at m (2^j - 1): epochs of length m, 2m, 4m, ...
    loop.refresh_due = [m](std::size_t k) {
      return k % m == 0 && std::has_single_bit(k / m + 1);
    };
  }
  if (config.adaptive) {
    loop.step = [a = *config.adaptive, m](std::size_t k, double) {
      return a.alpha * (1.0 + a.alpha * a.lambda * static_cast<double>(k / m));
    };
  } else {
    loop.step = [rate = config.rate](std::size_t, double) { return rate; };
  }
  loop.normalize = config.normalize;
  loop.max_iters = config.max_iters;

  Rng rng(config.seed);
  if (!monitor.reach(0, x0)) {
    return monitor.finish(x0, 0, TerminationReason::kNumericFailure);
  }
  const auto out = detail::run_spider_loop(problem, x0, loop, rng, monitor,
                                           config.run.transport);
  return monitor.finish(out.point, out.iterations, out.reason);
}

}  // namespace rspider
