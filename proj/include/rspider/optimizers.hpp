#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rspider/problem.hpp"
#include "rspider/spider.hpp"

namespace rspider {

enum class TerminationReason {
  kGradBelowThreshold,
  kMaxIters,
  kStageComplete,
  kIfoBudget,
  kNumericFailure,
};

std::string to_string(TerminationReason reason);

struct TraceRecord {
  std::size_t iteration = 0;
  std::uint64_t ifo = 0;
  double objective = 0.0;
  double grad_estimate_norm = 0.0;
  std::optional<double> true_grad_norm;
  double step = 0.0;  // geodesic length of the step taken from this iterate
  double elapsed_seconds = 0.0;
};

struct StageSummary {
  std::size_t stage = 0;  // 1-based
  double epsilon = 0.0;   // accuracy used by the stage (eps0 / 2^(stage-1))
  double target = 0.0;    // stop threshold on ||v||, eps0 / 2^stage
  std::size_t first_iteration = 0;
  std::size_t iterations = 0;
  std::size_t iteration_cap = 0;
  double delta = 0.0;
  double output_objective = 0.0;
  TerminationReason reason = TerminationReason::kMaxIters;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  std::optional<ManifoldPoint> terminal_point;
  double terminal_objective = 0.0;
  TerminationReason termination_reason = TerminationReason::kMaxIters;
  std::size_t iterations = 0;
  std::uint64_t total_ifo = 0;
  std::vector<StageSummary> stages;
  std::vector<std::string> warnings;
  std::string diagnostic;  // set on kNumericFailure
  // Constants and schedule the SPIDER methods ran with, after estimation.
  std::optional<double> lipschitz;
  std::optional<double> sigma;
  std::optional<SpiderSchedule> schedule;
};

struct StepEvent {
  std::size_t iteration;
  const ManifoldPoint& from;
  const ManifoldPoint& to;
  const TangentVector& estimate;
  double step;  // geodesic length of the update
};
using StepObserver = std::function<void(const StepEvent&)>;

/// Monitoring and budget options shared by every optimizer.
struct RunOptions {
  std::size_t record_every = 1;
  // When nonzero, an iterate is recorded only once at least this many IFO
  // calls have been spent since the previous record.
  std::uint64_t record_ifo_interval = 0;
  bool track_true_grad = false;  // full-gradient evaluation, not charged
  std::optional<std::uint64_t> ifo_budget;
  TransportMode transport = TransportMode::kExactGeodesic;
  bool use_retraction = false;
  StepObserver on_step;
};

struct RSpiderConfig {
  double epsilon = 1e-3;
  std::optional<double> lipschitz;  // estimated when absent
  std::optional<double> sigma;      // estimated when absent
  double n0 = 1.0;
  SamplingMode mode = SamplingMode::kFiniteSum;
  std::size_t max_iters = 1'000'000;
  std::uint64_t seed = 0;
  RunOptions run;
};

struct ScheduleResult {
  SpiderSchedule schedule;
  std::vector<std::string> warnings;
};

/// s = min(n, 16 sigma^2 / eps^2), p = n0 sqrt(s), |S1| = s,
/// |S2| = 4 sqrt(s) / n0, rounded up; n0 clamped to [1, 4 sqrt(s)].
ScheduleResult finite_sum_schedule(std::size_t n, double sigma, double epsilon,
                                   double n0);
/// p = sigma n0 / eps, |S1| = 64 sigma^2 / eps^2, |S2| = 4 sigma / (eps n0),
/// rounded up; n0 clamped to [1, 4 sigma / eps].
ScheduleResult online_schedule(double sigma, double epsilon, double n0);

/// eta_k = min(eps / (2 L n0), ||v|| / (4 L n0)).
double rspider_step(double epsilon, double lipschitz, double n0, double v_norm);
/// ceil(14 L n0 Delta / eps^2).
std::size_t rspider_iteration_bound(double lipschitz, double n0, double delta,
                                    double epsilon);

RunTrace run_rspider(const Problem& problem, const ManifoldPoint& x0,
                     const RSpiderConfig& config);

struct RSpiderAConfig {
  double alpha = 0.9;
  double beta = 1e-2;
  std::size_t p = 1;
  std::size_t s1 = 1;
  std::size_t s2 = 1;
  SamplingMode mode = SamplingMode::kFiniteSum;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;
  RunOptions run;
};

/// Normalized SPIDER steps of length alpha^floor(k/p) beta; runs to max_iters.
RunTrace run_rspider_a(const Problem& problem, const ManifoldPoint& x0,
                       const RSpiderAConfig& config);

struct RGdSpiderConfig {
  std::optional<double> epsilon0;  // default sqrt(Delta) / (2 sqrt(tau))
  double epsilon_final = 1e-3;
  double tau = 1.0;
  std::optional<double> lipschitz;
  std::optional<double> sigma;
  std::optional<double> lower_bound;  // f* or a lower bound; else optimum()
  double n0 = 1.0;
  SamplingMode mode = SamplingMode::kFiniteSum;
  std::size_t max_iters_per_stage = 10'000'000;
  std::uint64_t seed = 0;
  RunOptions run;
};

/// Stages t = 1..T with accuracy eps0 / 2^(t-1), each a SPIDER loop with
/// un-normalized steps x - v / (2 L n0) that ends once ||v|| <= eps / 2 or
/// after K^t = 64 L n0 Delta^t / eps^2 iterations.
RunTrace run_rgd_spider(const Problem& problem, const ManifoldPoint& x0,
                        const RGdSpiderConfig& config);

/// Smallest T >= 1 with eps0 / 2^T <= epsilon_final.
std::size_t rgd_stage_count(double epsilon0, double epsilon_final);

struct RsgdConfig {
  double c = 1e-2;
  double lambda = 0.0;  // eta_k = c / (1 + k lambda)
  std::size_t batch = 1;
  SamplingMode mode = SamplingMode::kFiniteSum;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;
  RunOptions run;
};

RunTrace run_rsgd(const Problem& problem, const ManifoldPoint& x0,
                  const RsgdConfig& config);

struct RsvrgConfig {
  std::size_t epoch_len = 1;
  double rate = 1e-2;
  std::size_t batch = 1;
  SamplingMode mode = SamplingMode::kFiniteSum;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;
  RunOptions run;
};

/// grad f_B(x) - P_{snapshot -> x}(grad f_B(snapshot) - full_grad_snapshot).
TangentVector svrg_direction(const Problem& problem, const ManifoldPoint& x,
                             const TangentVector& snapshot_full_grad,
                             Batch batch, IfoCounter* ifo = nullptr,
                             TransportMode mode = TransportMode::kExactGeodesic);

RunTrace run_rsvrg(const Problem& problem, const ManifoldPoint& x0,
                   const RsvrgConfig& config);

struct AdaptiveRate {
  double alpha = 1e-2;
  double lambda = 0.0;  // eta_k = alpha (1 + alpha lambda floor(k / p))
};

struct RsrgConfig {
  std::size_t epoch_len = 1;
  double rate = 1e-2;
  std::size_t batch = 1;
  std::optional<std::size_t> refresh_batch;  // defaults to n
  bool plus_variant = false;                 // epoch length doubles per restart
  std::optional<AdaptiveRate> adaptive;
  bool normalize = false;
  SamplingMode mode = SamplingMode::kFiniteSum;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;
  RunOptions run;
};

RunTrace run_rsrg(const Problem& problem, const ManifoldPoint& x0,
                  const RsrgConfig& config);

}  // namespace rspider
