#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rspider/problem.hpp"
#include "rspider/smoothness.hpp"

namespace rspider {

enum class SamplingMode {
  kFiniteSum,  // batches of size >= n use the exact full sum
  kOnline,     // n is treated as unbounded: always sample with replacement
};

/// Refresh interval and batch sizes of the recursive gradient estimator.
struct SpiderSchedule {
  std::size_t p = 1;   // refresh every p iterations
  std::size_t s1 = 1;  // refresh batch
  std::size_t s2 = 1;  // recursion batch
  // Per-step recursion batch as a function of the previous estimate's norm;
  // overrides s2 when set.
  std::function<std::size_t(double)> s2_rule;
  double n0 = 1.0;
  SamplingMode mode = SamplingMode::kFiniteSum;
};

/// Recursive gradient estimate v_k, based at the current iterate v.base().
struct SpiderState {
  TangentVector v;
  std::size_t steps_since_refresh = 0;
  std::size_t last_batch = 0;
};

/// Indices for one mini-batch: the full index set when `size >= n` in
/// finite-sum mode, otherwise `size` draws with replacement.
std::vector<std::size_t> draw_batch(std::size_t n, std::size_t size,
                                    SamplingMode mode, Rng& rng);

/// v = mean gradient over a fresh batch S1 at x. Charges |S1| IFO calls
/// (min(s1, n) in finite-sum mode).
SpiderState spider_refresh(const SpiderSchedule& schedule,
                           const ManifoldPoint& x, const Problem& problem,
                           Rng& rng, IfoCounter* ifo = nullptr);

/// v_k = g_S2(x_k) - P_{x_{k-1} -> x_k}(g_S2(x_{k-1}) - v_{k-1}) with the same
/// batch S2 at both points; x_{k-1} is state.v.base(). Charges 2|S2| calls.
SpiderState spider_recurse(const SpiderState& state,
                           const SpiderSchedule& schedule,
                           const ManifoldPoint& x_cur, const Problem& problem,
                           Rng& rng, IfoCounter* ifo = nullptr,
                           TransportMode mode = TransportMode::kExactGeodesic);

struct EstimationErrorReport {
  std::vector<double> mean_sq_error;     // Monte-Carlo E||v_k - grad f(x_k)||^2
  std::vector<double> bound;             // estimation-error bound per step
  std::vector<double> cumulative_sq_distance;  // sum_{i<k} d(x_i, x_{i+1})^2
  SmoothnessEstimates estimates;
};

/// Replays the estimator along a fixed trajectory (refresh at the first
/// point, recursion afterwards) `trials` times and compares the mean squared
/// estimation error with
///   1{|S1| < n} sigma^2 / |S1| + 1{|S2| < n} L^2 / |S2| sum_{i<k} d^2(x_i, x_{i+1}).
/// When `estimates` is absent they are computed with the trajectory points
/// as anchors.
EstimationErrorReport estimation_error_mc(
    const Problem& problem, const std::vector<ManifoldPoint>& trajectory,
    const SpiderSchedule& schedule, std::size_t trials, Rng& rng,
    std::optional<SmoothnessEstimates> estimates = std::nullopt);

}  // namespace rspider
