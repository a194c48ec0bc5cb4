#pragma once

#include <chrono>
#include <cmath>
#include <limits>

#include "rspider/errors.hpp"
#include "rspider/optimizers.hpp"

namespace rspider::detail {

/// Shared bookkeeping for optimizer loops: IFO counter, budget, trace records
/// and the step observer.
///
/// A record describes iterate k: the IFO calls spent to reach it, its
/// objective, and (once computed) the estimate formed there and the step taken
/// from it.
class RunMonitor {
 public:
  RunMonitor(const Problem& problem, const RunOptions& options, RunTrace& trace)
      : problem_(problem),
        options_(options),
        trace_(trace),
        start_(std::chrono::steady_clock::now()) {
    if (options_.record_every == 0) {
      throw ContractError("record_every must be at least 1");
    }
  }

  IfoCounter* ifo() { return &ifo_; }

  bool budget_exhausted() const {
    return options_.ifo_budget && ifo_.count() >= *options_.ifo_budget;
  }

  /// Called when iterate k is reached. Returns false (and marks the trace as a
  /// numeric failure) when a recorded objective is not finite.
  bool reach(std::size_t k, const ManifoldPoint& x, bool force = false) {
    if (!trace_.records.empty() && trace_.records.back().iteration >= k) {
      return true;
    }
    if (!force) {
      if (k % options_.record_every != 0) return true;
      if (!trace_.records.empty() && options_.record_ifo_interval > 0 &&
          ifo_.count() - trace_.records.back().ifo <
              options_.record_ifo_interval) {
        return true;
      }
    }
    TraceRecord rec;
    rec.iteration = k;
    rec.ifo = ifo_.count();
    rec.objective = problem_.full_loss(x);
    rec.grad_estimate_norm = std::numeric_limits<double>::quiet_NaN();
    if (options_.track_true_grad) {
      rec.true_grad_norm = norm(problem_.full_grad(x));
    }
    rec.elapsed_seconds = elapsed();
    trace_.records.push_back(rec);
    if (!std::isfinite(rec.objective)) {
      return fail("non-finite objective at iteration " + std::to_string(k));
    }
    return true;
  }

  /// Attaches the estimate norm and step length to the record of iterate k,
  /// if there is one. Returns false on a non-finite estimate.
  bool annotate(std::size_t k, double estimate_norm, double step) {
    if (!trace_.records.empty() && trace_.records.back().iteration == k) {
      trace_.records.back().grad_estimate_norm = estimate_norm;
      trace_.records.back().step = step;
    }
    if (!std::isfinite(estimate_norm)) {
      return fail("non-finite gradient estimate at iteration " +
                  std::to_string(k));
    }
    return true;
  }

  ManifoldPoint move(std::size_t k, const ManifoldPoint& x,
                     const TangentVector& direction, double step,
                     const TangentVector& estimate) {
    ManifoldPoint next = options_.use_retraction ? retract(x, direction)
                                                 : exp_map(x, direction);
    if (options_.on_step) {
      options_.on_step(StepEvent{k, x, next, estimate, step});
    }
    return next;
  }

  RunTrace& finish(const ManifoldPoint& x, std::size_t iterations,
                   TerminationReason reason) {
    if (trace_.diagnostic.empty()) reach(iterations, x, true);
    trace_.terminal_point = x;
    trace_.terminal_objective = problem_.full_loss(x);
    if (!trace_.diagnostic.empty()) reason = TerminationReason::kNumericFailure;
    trace_.termination_reason = reason;
    trace_.iterations = iterations;
    trace_.total_ifo = ifo_.count();
    return trace_;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  bool fail(std::string message) {
    trace_.termination_reason = TerminationReason::kNumericFailure;
    trace_.diagnostic = std::move(message);
    return false;
  }

  const Problem& problem_;
  const RunOptions& options_;
  RunTrace& trace_;
  IfoCounter ifo_;
  std::chrono::steady_clock::time_point start_;
};


struct SpiderLoop {
  SpiderSchedule schedule;
  // Refresh at local iteration k; defaults to k % p == 0.
  std::function<bool(std::size_t)> refresh_due;
  // Step size at local iteration k given ||v_k||.
  std::function<double(std::size_t, double)> step;
  bool normalize = true;
  // Stop (before stepping) once ||v_k|| falls to this level.
  std::optional<double> stop_below;
  std::size_t max_iters = 0;
  std::size_t first_iteration = 0;  // global index of local iteration 0
};

struct LoopOutcome {
  ManifoldPoint point;
  std::size_t iterations;  // local iterations performed
  TerminationReason reason;
};

/// The SPIDER iteration shared by R-SPIDER, R-SPIDER-A, R-SRG and each
/// R-GD-SPIDER stage. Iterate `first_iteration` must already be reached.
LoopOutcome run_spider_loop(const Problem& problem, const ManifoldPoint& x0,
                            const SpiderLoop& loop, Rng& rng,
                            RunMonitor& monitor, TransportMode transport);

}  // namespace rspider::detail
