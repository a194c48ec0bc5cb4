#include "rspider/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rspider/errors.hpp"
#include "run_monitor.hpp"

namespace rspider {
namespace {

std::size_t ceil_count(double x) {
  if (!(x >= 1.0)) return 1;
  return static_cast<std::size_t>(std::ceil(x));
}

struct Constants {
  double lipschitz;
  double sigma;
};

Constants resolve_constants(const Problem& problem, const ManifoldPoint& x0,
                            std::optional<double> lipschitz,
                            std::optional<double> sigma, std::uint64_t seed) {
  if (!lipschitz || !sigma) {
    SmoothnessOptions opts;
    opts.seed = seed ^ 0x5851f42d4c957f2dULL;
    opts.anchors = {x0};
    const SmoothnessEstimates est = estimate_smoothness(problem, opts);
    if (!lipschitz) lipschitz = est.lipschitz;
    if (!sigma) sigma = est.sigma;
  }
  if (!(*lipschitz > 0.0) || !std::isfinite(*lipschitz)) {
    throw ContractError("Lipschitz constant must be positive and finite");
  }
  if (!(*sigma >= 0.0) || !std::isfinite(*sigma)) {
    throw ContractError("sigma must be nonnegative and finite");
  }
  return {*lipschitz, *sigma};
}

double clamp_n0(double n0, double upper, const char* rule,
                std::vector<std::string>& warnings) {
  upper = std::max(1.0, upper);
  if (n0 >= 1.0 && n0 <= upper) return n0;
  const double clamped = std::clamp(n0, 1.0, upper);
  std::ostringstream msg;
  msg << "n0 = " << n0 << " outside [1, " << rule << " = " << upper
      << "], clamped to " << clamped;
  warnings.push_back(msg.str());
  return clamped;
}

}  // namespace

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kGradBelowThreshold: return "GradBelowThreshold";
    case TerminationReason::kMaxIters: return "MaxIters";
    case TerminationReason::kStageComplete: return "StageComplete";
    case TerminationReason::kIfoBudget: return "IfoBudget";
    case TerminationReason::kNumericFailure: return "NumericFailure";
  }
  return "unknown";
}

ScheduleResult finite_sum_schedule(std::size_t n, double sigma, double epsilon,
                                   double n0) {
  if (!(epsilon > 0.0)) throw ContractError("epsilon must be positive");
  ScheduleResult out;
  const double s =
      std::min(static_cast<double>(n), 16.0 * sigma * sigma / (epsilon * epsilon));
  const double root = std::sqrt(s);
  n0 = clamp_n0(n0, 4.0 * root, "4 sqrt(s)", out.warnings);
  out.schedule.n0 = n0;
  out.schedule.p = ceil_count(n0 * root);
  out.schedule.s1 = ceil_count(s);
  out.schedule.s2 = ceil_count(4.0 * root / n0);
  out.schedule.mode = SamplingMode::kFiniteSum;
  return out;
}

ScheduleResult online_schedule(double sigma, double epsilon, double n0) {
  if (!(epsilon > 0.0)) throw ContractError("epsilon must be positive");
  ScheduleResult out;
  n0 = clamp_n0(n0, 4.0 * sigma / epsilon, "4 sigma / eps", out.warnings);
  out.schedule.n0 = n0;
  out.schedule.p = ceil_count(sigma * n0 / epsilon);
  out.schedule.s1 = ceil_count(64.0 * sigma * sigma / (epsilon * epsilon));
  out.schedule.s2 = ceil_count(4.0 * sigma / (epsilon * n0));
  out.schedule.mode = SamplingMode::kOnline;
  return out;
}

double rspider_step(double epsilon, double lipschitz, double n0, double v_norm) {
  return std::min(epsilon / (2.0 * lipschitz * n0),
                  v_norm / (4.0 * lipschitz * n0));
}

std::size_t rspider_iteration_bound(double lipschitz, double n0, double delta,
                                    double epsilon) {
  return static_cast<std::size_t>(
      std::ceil(14.0 * lipschitz * n0 * delta / (epsilon * epsilon)));
}

namespace detail {

LoopOutcome run_spider_loop(const Problem& problem, const ManifoldPoint& x0,
                            const SpiderLoop& loop, Rng& rng,
                            RunMonitor& monitor, TransportMode transport) {
  ManifoldPoint x = x0;
  std::optional<SpiderState> state;
  for (std::size_t k = 0;; ++k) {
    const std::size_t g = loop.first_iteration + k;
    if (k >= loop.max_iters) return {x, k, TerminationReason::kMaxIters};
    if (monitor.budget_exhausted()) return {x, k, TerminationReason::kIfoBudget};

    const bool refresh =
        !state || (loop.refresh_due ? loop.refresh_due(k)
                                    : k % loop.schedule.p == 0);
    if (refresh) {
      state = spider_refresh(loop.schedule, x, problem, rng, monitor.ifo());
    } else {
      state = spider_recurse(*state, loop.schedule, x, problem, rng,
                             monitor.ifo(), transport);
    }
    const double vn = norm(state->v);
    if (!monitor.annotate(g, vn, 0.0)) {
      return {x, k, TerminationReason::kNumericFailure};
    }
    if ((loop.stop_below && vn <= *loop.stop_below) ||
        (loop.normalize && vn == 0.0)) {
      return {x, k, TerminationReason::kGradBelowThreshold};
    }

    const double eta = loop.step(k, vn);
    const double scale = loop.normalize ? eta / vn : eta;
    const double length = loop.normalize ? eta : eta * vn;
    monitor.annotate(g, vn, length);
    x = monitor.move(g, x, (-scale) * state->v, length, state->v);
    if (!monitor.reach(g + 1, x)) {
      return {x, k + 1, TerminationReason::kNumericFailure};
    }
  }
}

}  // namespace detail

RunTrace run_rspider(const Problem& problem, const ManifoldPoint& x0,
                     const RSpiderConfig& config) {
  if (!(config.epsilon > 0.0)) throw ContractError("epsilon must be positive");
  const Constants c = resolve_constants(problem, x0, config.lipschitz,
                                        config.sigma, config.seed);
  ScheduleResult sr =
      config.mode == SamplingMode::kFiniteSum
          ? finite_sum_schedule(problem.size(), c.sigma, config.epsilon, config.n0)
          : online_schedule(c.sigma, config.epsilon, config.n0);

  RunTrace trace;
  trace.warnings = std::move(sr.warnings);
  trace.lipschitz = c.lipschitz;
  trace.sigma = c.sigma;
  trace.schedule = sr.schedule;
  detail::RunMonitor monitor(problem, config.run, trace);

  detail::SpiderLoop loop;
  loop.schedule = sr.schedule;
  const double eps = config.epsilon;
  const double n0 = sr.schedule.n0;
  loop.step = [eps, n0, lip = c.lipschitz](std::size_t, double vn) {
    return rspider_step(eps, lip, n0, vn);
  };
  loop.normalize = true;
  loop.stop_below = 0.5 * eps;
  loop.max_iters = config.max_iters;

  Rng rng(config.seed);
  if (!monitor.reach(0, x0)) {
    return monitor.finish(x0, 0, TerminationReason::kNumericFailure);
  }
  const auto out = detail::run_spider_loop(problem, x0, loop, rng, monitor,
                                           config.run.transport);
  return monitor.finish(out.point, out.iterations, out.reason);
}

RunTrace run_rspider_a(const Problem& problem, const ManifoldPoint& x0,
                       const RSpiderAConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
    throw ContractError("rspider_a: alpha must lie in (0, 1]");
  }
  if (!(config.beta > 0.0)) throw ContractError("rspider_a: beta must be positive");
  if (config.p == 0) throw ContractError("rspider_a: p must be at least 1");

  RunTrace trace;
  detail::RunMonitor monitor(problem, config.run, trace);
  detail::SpiderLoop loop;
  loop.schedule.p = config.p;
  loop.schedule.s1 = std::max<std::size_t>(config.s1, 1);
  loop.schedule.s2 = std::max<std::size_t>(config.s2, 1);
  loop.schedule.mode = config.mode;
  loop.step = [alpha = config.alpha, beta = config.beta, p = config.p](
                  std::size_t k, double) {
    return std::pow(alpha, static_cast<double>(k / p)) * beta;
  };
  loop.normalize = true;
  loop.max_iters = config.max_iters;

  Rng rng(config.seed);
  if (!monitor.reach(0, x0)) {
    return monitor.finish(x0, 0, TerminationReason::kNumericFailure);
  }
  const auto out = detail::run_spider_loop(problem, x0, loop, rng, monitor,
                                           config.run.transport);
  return monitor.finish(out.point, out.iterations, out.reason);
}

std::size_t rgd_stage_count(double epsilon0, double epsilon_final) {
  if (!(epsilon_final > 0.0) || !(epsilon0 > 0.0)) {
    throw ContractError("need epsilon0 > 0 and epsilon_final > 0");
  }
  // Smallest T >= 1 with eps0 / 2^T <= epsilon_final.
  std::size_t stages = 1;
  for (double e = 0.5 * epsilon0; e > epsilon_final; e *= 0.5) ++stages;
  return stages;
}

RunTrace run_rgd_spider(const Problem& problem, const ManifoldPoint& x0,
                        const RGdSpiderConfig& config) {
  if (!(config.tau > 0.0)) throw ContractError("rgd_spider: tau must be positive");
  const Constants c = resolve_constants(problem, x0, config.lipschitz,
                                        config.sigma, config.seed);
  const std::optional<double> f_star =
      config.lower_bound ? config.lower_bound : problem.optimum();

  double eps0 = 0.0;
  if (config.epsilon0) {
    eps0 = *config.epsilon0;
  } else {
    if (!f_star) {
      throw ContractError(
          "rgd_spider: epsilon0 or a lower bound on f is required");
    }
    const double delta = problem.full_loss(x0) - *f_star;
    if (!(delta > 0.0)) {
      throw ContractError("rgd_spider: x0 is already at the lower bound");
    }
    eps0 = std::sqrt(delta) / (2.0 * std::sqrt(config.tau));
  }
  const std::size_t stages = rgd_stage_count(eps0, config.epsilon_final);
  const double n0 = config.n0;
  const double n = static_cast<double>(problem.size());
  const bool finite = config.mode == SamplingMode::kFiniteSum;

  RunTrace trace;
  trace.lipschitz = c.lipschitz;
  trace.sigma = c.sigma;
  detail::RunMonitor monitor(problem, config.run, trace);
  Rng rng(config.seed);
  ManifoldPoint x = x0;
  std::size_t global = 0;
  if (!monitor.reach(0, x0)) {
    return monitor.finish(x0, 0, TerminationReason::kNumericFailure);
  }

  for (std::size_t t = 1; t <= stages; ++t) {
    const double eps = std::ldexp(eps0, -static_cast<int>(t - 1));
    if (monitor.budget_exhausted()) {
      return monitor.finish(x, global, TerminationReason::kIfoBudget);
    }
    const double delta = f_star
                             ? std::max(problem.full_loss(x) - *f_star, 0.0)
                             : 4.0 * config.tau * eps * eps;
    const std::size_t cap = std::min(
        config.max_iters_per_stage,
        ceil_count(64.0 * c.lipschitz * n0 * delta / (eps * eps)));

    detail::SpiderLoop loop;
    SpiderSchedule& sched = loop.schedule;
    sched.n0 = n0;
    sched.mode = config.mode;
    const double sigma = c.sigma;
    if (finite) {
      const double s = std::min(n, 32.0 * sigma * sigma / (eps * eps));
      sched.p = ceil_count(n0 * std::sqrt(s));
      sched.s1 = ceil_count(s);
      const double p = static_cast<double>(sched.p);
      sched.s2_rule = [p, n0, eps, n](double prev) {
        return ceil_count(
            std::min(std::ceil(8.0 * p * prev * prev / (n0 * n0 * eps * eps)), n));
      };
    } else {
      sched.p = ceil_count(sigma * n0 / eps);
      sched.s1 = ceil_count(32.0 * sigma * sigma / (eps * eps));
      sched.s2_rule = [sigma, n0, eps](double prev) {
        return ceil_count(8.0 * sigma * prev * prev / (eps * eps * eps * n0));
      };
    }
    loop.step = [inv = 1.0 / (2.0 * c.lipschitz * n0)](std::size_t, double) {
      return inv;
    };
    loop.normalize = false;
    loop.stop_below = std::ldexp(eps0, -static_cast<int>(t));
    loop.max_iters = cap;
    loop.first_iteration = global;

    const auto out = detail::run_spider_loop(problem, x, loop, rng, monitor,
                                             config.run.transport);
    StageSummary summary;
    summary.stage = t;
    summary.epsilon = eps;
    summary.target = std::ldexp(eps0, -static_cast<int>(t));
    summary.first_iteration = global;
    summary.iterations = out.iterations;
    summary.iteration_cap = cap;
    summary.delta = delta;
    summary.output_objective = problem.full_loss(out.point);
    summary.reason = out.reason == TerminationReason::kGradBelowThreshold
                         ? TerminationReason::kStageComplete
                         : out.reason;
    trace.stages.push_back(summary);
    x = out.point;
    global += out.iterations;

    if (out.reason == TerminationReason::kNumericFailure ||
        out.reason == TerminationReason::kIfoBudget) {
      return monitor.finish(x, global, out.reason);
    }
    monitor.reach(global, x, true);
  }
  return monitor.finish(x, global, TerminationReason::kStageComplete);
}

}  // namespace rspider
