#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rspider/bench/config.hpp"
#include "rspider/bench/problem_factory.hpp"
#include "rspider/optimizers.hpp"
#include "rspider/spider.hpp"

namespace rspider::bench {

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> budget;
  std::optional<std::string> out;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

using Params = std::map<std::string, std::string>;

/// Cartesian product of the comma-separated values in `section`, layered over
/// the optimizer's defaults.
std::vector<Params> expand_grid(const std::string& optimizer,
                                const RunConfig& config);

/// "n", "<x>n", "sqrtn" or a plain count.
std::size_t resolve_count(const std::string& text, std::size_t n);

struct RunSettings {
  std::uint64_t budget = 0;
  std::uint64_t record_ifo_interval = 0;
  bool track_true_grad = false;
  std::optional<double> f_star;
};

/// Runs one named optimizer (rsgd, rsvrg, rsrg, rsrg_plus, rspider,
/// rspider_a, rgd_spider) with resolved parameters until the IFO budget.
RunTrace run_optimizer(const std::string& optimizer, const Params& params,
                       const Problem& problem, const ManifoldPoint& x0,
                       std::uint64_t seed, const RunSettings& settings);

int cmd_run(RunConfig config, std::ostream& out, std::ostream& err);
int cmd_gradcheck(const RunConfig& config, std::ostream& out, std::ostream& err);

struct VarianceCheck {
  EstimationErrorReport report;
  SpiderSchedule schedule;
  std::size_t n = 0;
  double inflation = 1.05;
  double worst_ratio = 0.0;  // max measured / bound over steps with bound > 0
  bool pass = false;
};

/// Runs the estimator Monte-Carlo along a frozen normalized-SPIDER trajectory
/// ([variance]: p, s1, s2, trials, step, seed, inflation).
VarianceCheck variance_check(const RunConfig& config);
int cmd_variance_check(const RunConfig& config, std::ostream& out,
                       std::ostream& err);

int cmd_plot(const std::string& dir, std::ostream& out, std::ostream& err);

/// Worker count from RSPIDER_WORKERS (default 1).
std::size_t worker_count();

}  // namespace rspider::bench
