#include "rspider/bench/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <regex>
#include <thread>

#include "rspider/bench/trace_io.hpp"
#include "rspider/errors.hpp"
#include "rspider/oracle.hpp"

namespace rspider::bench {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kRateGrid = "1e-1, 1e-2, 1e-3, 1e-4";

Params defaults_for(const std::string& optimizer) {
  if (optimizer == "rsgd") {
    return {{"c", kRateGrid}, {"lambda", "0"}, {"batch", "1"}};
  }
  if (optimizer == "rsvrg") {
    return {{"rate", kRateGrid}, {"epoch_len", "n"}, {"batch", "1"}};
  }
  if (optimizer == "rsrg" || optimizer == "rsrg_plus") {
    return {{"rate", kRateGrid},     {"epoch_len", "n"}, {"batch", "1"},
            {"refresh_batch", "n"},  {"normalize", "false"}};
  }
  if (optimizer == "rspider") {
    return {{"epsilon", "1e-3"}, {"lipschitz", "estimate"},
            {"sigma", "estimate"}, {"n0", "1"}, {"mode", "finite"}};
  }
  if (optimizer == "rspider_a") {
    return {{"alpha", "0.8, 0.85, 0.9, 0.95, 0.99"},
            {"beta", "5e-2, 1e-2, 5e-3, 1e-3"},
            {"p", "sqrtn"}, {"s1", "n"}, {"s2", "sqrtn"}, {"mode", "finite"}};
  }
  if (optimizer == "rgd_spider") {
    return {{"epsilon0", "auto"}, {"epsilon_final", "1e-3"}, {"tau", "1"},
            {"lipschitz", "estimate"}, {"sigma", "estimate"}, {"n0", "1"},
            {"mode", "finite"}};
  }
  throw ConfigError("unknown optimizer '" + optimizer + "'");
}

double number(const Params& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw ConfigError("missing parameter '" + key + "'");
  double v = 0.0;
  const std::string& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("parameter " + key + ": expected a number, got '" + s + "'");
  }
  return v;
}

std::optional<double> estimate_or(const Params& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end() || it->second == "estimate" || it->second == "auto") {
    return std::nullopt;
  }
  return number(p, key);
}

bool flag(const Params& p, const std::string& key) {
  const auto it = p.find(key);
  return it != p.end() && (it->second == "true" || it->second == "1");
}

SamplingMode sampling_mode(const Params& p) {
  const auto it = p.find("mode");
  if (it == p.end() || it->second == "finite") return SamplingMode::kFiniteSum;
  if (it->second == "online") return SamplingMode::kOnline;
  throw ConfigError("mode must be 'finite' or 'online'");
}

std::size_t count(const Params& p, const std::string& key, std::size_t n) {
  const auto it = p.find(key);
  if (it == p.end()) throw ConfigError("missing parameter '" + key + "'");
  return resolve_count(it->second, n);
}

void run_parallel(std::vector<std::function<void()>>& tasks,
                  std::size_t workers) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) tasks[i]();
  };
  workers = std::max<std::size_t>(1, std::min(workers, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

json params_json(const Params& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

struct Cell {
  std::string optimizer;
  Params params;
  std::uint64_t seed = 0;
  std::optional<RunTrace> trace;
  std::string error;
};

double score(const Cell& cell) {
  if (!cell.trace || !cell.error.empty() ||
      cell.trace->termination_reason == TerminationReason::kNumericFailure ||
      !std::isfinite(cell.trace->terminal_objective)) {
    return std::numeric_limits<double>::infinity();
  }
  return cell.trace->terminal_objective;
}

void execute(std::vector<Cell>& cells, const Problem& problem,
             const RunSettings& settings) {
  std::vector<std::function<void()>> tasks;
  for (Cell& cell : cells) {
    tasks.emplace_back([&cell, &problem, &settings] {
      try {
        const ManifoldPoint x0 = initial_point(problem, cell.seed);
        cell.trace = run_optimizer(cell.optimizer, cell.params, problem, x0,
                                   cell.seed, settings);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    });
  }
  run_parallel(tasks, worker_count());
}

}  // namespace

std::size_t worker_count() {
  if (const char* env = std::getenv("RSPIDER_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  return 1;
}

void apply_overrides(RunConfig& config, const Overrides& o) {
  if (o.seed) config.set("run", "seeds", std::to_string(*o.seed));
  if (o.budget) config.set("run", "budget", *o.budget);
  if (o.out) config.set("run", "out", *o.out);
}

std::size_t resolve_count(const std::string& text, std::size_t n) {
  if (text == "sqrtn") {
    return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  }
  std::string body = text;
  double scale = 1.0;
  if (!body.empty() && body.back() == 'n') {
    scale = static_cast<double>(n);
    body.pop_back();
    if (body.empty()) body = "1";
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || ptr != body.data() + body.size() || v < 0.0) {
    throw ConfigError("expected a count, 'n', '<x>n' or 'sqrtn', got '" + text + "'");
  }
  return static_cast<std::size_t>(std::ceil(v * scale));
}

std::vector<Params> expand_grid(const std::string& optimizer,
                                const RunConfig& config) {
  Params base = defaults_for(optimizer);
  if (const auto* section = config.section(optimizer)) {
    for (const auto& [k, v] : section->entries) base[k] = v;
  }
  std::vector<Params> grid{Params{}};
  for (const auto& [key, value] : base) {
    const auto items = split_list(value);
    if (items.empty()) throw ConfigError(optimizer + "." + key + " is empty");
    std::vector<Params> next;
    for (const Params& partial : grid) {
      for (const std::string& item : items) {
        Params p = partial;
        p[key] = item;
        next.push_back(std::move(p));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

RunTrace run_optimizer(const std::string& optimizer, const Params& p,
                       const Problem& problem, const ManifoldPoint& x0,
                       std::uint64_t seed, const RunSettings& settings) {
  const std::size_t n = problem.size();
  constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
  RunOptions run;
  run.ifo_budget = settings.budget;
  run.record_ifo_interval = settings.record_ifo_interval;
  run.track_true_grad = settings.track_true_grad;

  if (optimizer == "rsgd") {
    RsgdConfig c;
    c.c = number(p, "c");
    c.lambda = number(p, "lambda");
    c.batch = count(p, "batch", n);
    c.mode = sampling_mode(p);
    c.max_iters = kUnbounded;
    c.seed = seed;
    c.run = run;
    return run_rsgd(problem, x0, c);
  }
  if (optimizer == "rsvrg") {
    RsvrgConfig c;
    c.rate = number(p, "rate");
    c.epoch_len = count(p, "epoch_len", n);
    c.batch = count(p, "batch", n);
    c.mode = sampling_mode(p);
    c.max_iters = kUnbounded;
    c.seed = seed;
    c.run = run;
    return run_rsvrg(problem, x0, c);
  }
  if (optimizer == "rsrg" || optimizer == "rsrg_plus") {
    RsrgConfig c;
    c.rate = number(p, "rate");
    c.epoch_len = count(p, "epoch_len", n);
    c.batch = count(p, "batch", n);
    c.refresh_batch = count(p, "refresh_batch", n);
    c.plus_variant = optimizer == "rsrg_plus";
    c.normalize = flag(p, "normalize");
    if (p.count("adaptive_alpha")) {
      c.adaptive = AdaptiveRate{number(p, "adaptive_alpha"),
                                p.count("adaptive_lambda")
                                    ? number(p, "adaptive_lambda")
                                    : 0.0};
    }
    c.mode = sampling_mode(p);
    c.max_iters = kUnbounded;
    c.seed = seed;
    c.run = run;
    return run_rsrg(problem, x0, c);
  }
  if (optimizer == "rspider") {
    RSpiderConfig c;
    c.epsilon = number(p, "epsilon");
    c.lipschitz = estimate_or(p, "lipschitz");
    c.sigma = estimate_or(p, "sigma");
    c.n0 = number(p, "n0");
    c.mode = sampling_mode(p);
    c.max_iters = kUnbounded;
    c.seed = seed;
    c.run = run;
    return run_rspider(problem, x0, c);
  }
  if (optimizer == "rspider_a") {
    RSpiderAConfig c;
    c.alpha = number(p, "alpha");
    c.beta = number(p, "beta");
    c.p = count(p, "p", n);
    c.s1 = count(p, "s1", n);
    c.s2 = count(p, "s2", n);
    c.mode = sampling_mode(p);
    c.max_iters = kUnbounded;
    c.seed = seed;
    c.run = run;
    return run_rspider_a(problem, x0, c);
  }
  if (optimizer == "rgd_spider") {
    RGdSpiderConfig c;
    c.epsilon0 = estimate_or(p, "epsilon0");
    c.epsilon_final = number(p, "epsilon_final");
    c.tau = number(p, "tau");
    c.lipschitz = estimate_or(p, "lipschitz");
    c.sigma = estimate_or(p, "sigma");
    c.lower_bound = settings.f_star;
    c.n0 = number(p, "n0");
    c.mode = sampling_mode(p);
    c.seed = seed;
    c.run = run;
    return run_rgd_spider(problem, x0, c);
  }
  throw ConfigError("unknown optimizer '" + optimizer + "'");
}

int cmd_run(RunConfig config, std::ostream& out, std::ostream& err) {
  BenchProblem bench;
  RunSettings settings;
  std::vector<std::string> optimizers;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<Params>> grids;
  try {
    config.validate();
    optimizers = config.optimizers();
    if (optimizers.empty()) throw ConfigError("run.optimizers is empty");
    seeds = config.seeds();
    bench = make_problem(config);
    const std::size_t n = bench.problem->size();
    settings.budget = config.budget(n);
    settings.record_ifo_interval =
        resolve_count(config.get_or("run", "record_ifo", "0.01n"), n);
    settings.track_true_grad = config.get_bool("run", "track_true_grad", false);
    settings.f_star = bench.f_star;
    for (const std::string& name : optimizers) {
      grids.push_back(expand_grid(name, config));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const Problem& problem = *bench.problem;
  const std::size_t n = problem.size();

  // Tuning: every grid point on the first seed, keep the best final objective.
  std::vector<Cell> tuning;
  std::vector<std::pair<std::size_t, std::size_t>> tuning_index;
  for (std::size_t o = 0; o < optimizers.size(); ++o) {
    if (grids[o].size() < 2) continue;
    for (std::size_t g = 0; g < grids[o].size(); ++g) {
      tuning.push_back({optimizers[o], grids[o][g], seeds.front(), {}, {}});
      tuning_index.emplace_back(o, g);
    }
  }
  execute(tuning, problem, settings);
  std::vector<Params> chosen;
  std::vector<json> tuning_log(optimizers.size(), json::array());
  for (std::size_t o = 0; o < optimizers.size(); ++o) chosen.push_back(grids[o].front());
  std::vector<double> best(optimizers.size(), std::numeric_limits<double>::infinity());
  for (std::size_t t = 0; t < tuning.size(); ++t) {
    const auto [o, g] = tuning_index[t];
    const double s = score(tuning[t]);
    tuning_log[o].push_back({{"params", params_json(tuning[t].params)},
                             {"final_objective", finite_or_null(s)}});
    if (s < best[o]) {
      best[o] = s;
      chosen[o] = grids[o][g];
    }
  }

  std::vector<Cell> cells;
  for (std::size_t o = 0; o < optimizers.size(); ++o) {
    for (std::uint64_t seed : seeds) {
      cells.push_back({optimizers[o], chosen[o], seed, {}, {}});
    }
  }
  execute(cells, problem, settings);

  bool runset_min = !bench.f_star.has_value();
  double reference = bench.f_star.value_or(std::numeric_limits<double>::infinity());
  if (runset_min) {
    for (const Cell& c : cells) {
      if (!c.trace) continue;
      for (const TraceRecord& r : c.trace->records) {
        if (std::isfinite(r.objective)) reference = std::min(reference, r.objective);
      }
    }
  }

  const fs::path dir = config.out_dir();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << dir << ": "
        << ec.message() << '\n';
    return 2;
  }

  bool failed = false;
  json summary;
  json config_json = json::object();
  for (const auto& section : config.sections()) {
    json s = json::object();
    for (const auto& [k, v] : section.entries) s[k] = v;
    config_json[section.name] = s;
  }
  summary["config"] = config_json;
  summary["problem"] = {{"name", problem.name()},
                        {"n", n},
                        {"manifold", problem.manifold().to_string()},
                        {"f_star", bench.f_star ? json(*bench.f_star) : json()},
                        {"f_star_source", bench.f_star_source},
                        {"notes", bench.notes}};
  summary["budget_ifo"] = settings.budget;
  summary["subopt_reference"] = runset_min ? "runset_min" : "f_star";
  summary["tuned_on_seed"] = seeds.front();

  json opt_list = json::array();
  std::vector<std::pair<double, std::string>> ranking;
  for (std::size_t o = 0; o < optimizers.size(); ++o) {
    json runs = json::array();
    std::vector<double> finals;
    for (Cell& c : cells) {
      if (c.optimizer != optimizers[o]) continue;
      const std::string file = trace_file_name(c.optimizer, c.seed);
      json run = {{"seed", c.seed}, {"trace_file", file}};
      if (!c.error.empty()) {
        failed = true;
        run["error"] = c.error;
        runs.push_back(run);
        continue;
      }
      const RunTrace& t = *c.trace;
      std::ofstream csv(dir / file);
      write_trace(csv, c.optimizer + "_seed" + std::to_string(c.seed), c.seed, t,
                  n, reference, runset_min);
      const double final_subopt = t.terminal_objective - reference;
      finals.push_back(final_subopt);
      run["final_objective"] = finite_or_null(t.terminal_objective);
      run["final_subopt"] = finite_or_null(final_subopt);
      run["total_ifo"] = t.total_ifo;
      run["iterations"] = t.iterations;
      run["wall_clock_s"] =
          t.records.empty() ? 0.0 : t.records.back().elapsed_seconds;
      run["termination"] = to_string(t.termination_reason);
      run["warnings"] = t.warnings;
      if (t.lipschitz) run["lipschitz"] = *t.lipschitz;
      if (t.sigma) run["sigma"] = *t.sigma;
      if (!t.diagnostic.empty()) {
        failed = true;
        run["diagnostic"] = t.diagnostic;
      }
      runs.push_back(run);
    }
    const double med = median(finals);
    ranking.emplace_back(std::isfinite(med) ? med : HUGE_VAL, optimizers[o]);
    opt_list.push_back({{"name", optimizers[o]},
                        {"params", params_json(chosen[o])},
                        {"tuning", tuning_log[o]},
                        {"median_final_subopt", finite_or_null(med)},
                        {"runs", runs}});
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  json ranking_json = json::array();
  for (const auto& [value, name] : ranking) ranking_json.push_back(name);
  summary["optimizers"] = opt_list;
  summary["ranking"] = ranking_json;
  std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';

  out << "problem " << problem.name() << " n=" << n << " budget=" << settings.budget
      << " IFO (" << format_number(double(settings.budget) / double(n)) << "n)\n";
  for (const auto& [value, name] : ranking) {
    out << std::left << std::setw(12) << name
        << " median final subopt " << format_number(value) << '\n';
  }
  out << "wrote " << cells.size() << " traces and summary.json to " << dir.string()
      << '\n';
  if (failed) {
    err << "error: some runs failed; see summary.json\n";
    return 1;
  }
  return 0;
}

int cmd_gradcheck(const RunConfig& config, std::ostream& out, std::ostream& err) {
  BenchProblem bench;
  try {
    bench = make_problem(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const Problem& problem = *bench.problem;
  oracle::FdConfig fd;
  fd.step = config.get_double("gradcheck", "step", 1e-5);
  fd.directions =
      static_cast<std::size_t>(config.get_int("gradcheck", "directions", 5));
  const auto instances = config.get_int("gradcheck", "instances", 5);
  const auto components = std::min<std::size_t>(
      problem.size(),
      static_cast<std::size_t>(config.get_int("gradcheck", "components", 3)));
  const double threshold = config.get_double("gradcheck", "threshold", 1e-4);
  const std::vector<std::uint64_t> seeds = config.has("run", "seeds")
                                               ? config.seeds()
                                               : std::vector<std::uint64_t>{0};
  Rng rng(seeds.front());

  double worst = 0.0;
  for (std::int64_t inst = 0; inst < instances; ++inst) {
    const ManifoldPoint x = random_point(problem.manifold(), rng);
    double inst_worst = oracle::gradient_check(problem, x, rng, fd).max_relative_error;
    for (std::size_t i = 0; i < components; ++i) {
      inst_worst = std::max(
          inst_worst, oracle::gradient_check(problem, x, rng, fd, i).max_relative_error);
    }
    out << "instance " << inst << ": max relative error "
        << format_number(inst_worst) << '\n';
    worst = std::max(worst, inst_worst);
  }
  out << "max relative error " << format_number(worst) << " (threshold "
      << format_number(threshold) << ")\n";
  if (!(worst <= threshold)) {
    err << "gradcheck failed\n";
    return 1;
  }
  return 0;
}

VarianceCheck variance_check(const RunConfig& config) {
  const BenchProblem bench = make_problem(config);
  const Problem& problem = *bench.problem;
  const std::size_t n = problem.size();
  VarianceCheck check;
  check.n = n;
  check.inflation = config.get_double("variance", "inflation", 1.05);
  const auto seed =
      static_cast<std::uint64_t>(config.get_int("variance", "seed", 0));
  const auto trials =
      static_cast<std::size_t>(config.get_int("variance", "trials", 1000));

  check.schedule.p = resolve_count(config.get_or("variance", "p", "4"), n);
  check.schedule.s1 = resolve_count(config.get_or("variance", "s1", "16"), n);
  check.schedule.s2 = resolve_count(config.get_or("variance", "s2", "4"), n);

  // Frozen trajectory: one epoch of normalized SPIDER steps.
  const ManifoldPoint x0 = initial_point(problem, seed);
  std::vector<ManifoldPoint> trajectory{x0};
  RSpiderAConfig walk;
  walk.alpha = 1.0;
  walk.beta = config.get_double("variance", "step", 0.05);
  walk.p = check.schedule.p;
  walk.s1 = check.schedule.s1;
  walk.s2 = check.schedule.s2;
  walk.max_iters = check.schedule.p;
  walk.seed = seed;
  walk.run.on_step = [&](const StepEvent& e) { trajectory.push_back(e.to); };
  run_rspider_a(problem, x0, walk);

  Rng rng(seed + 1);
  check.report = estimation_error_mc(problem, trajectory, check.schedule, trials, rng);
  check.pass = true;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double measured = check.report.mean_sq_error[k];
    const double bound = check.report.bound[k];
    if (bound > 0.0) check.worst_ratio = std::max(check.worst_ratio, measured / bound);
    if (measured > check.inflation * bound) check.pass = false;
  }
  return check;
}

int cmd_variance_check(const RunConfig& config, std::ostream& out,
                       std::ostream& err) {
  VarianceCheck check;
  try {
    check = variance_check(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const auto& r = check.report;
  out << "n = " << check.n << ", p = " << check.schedule.p
      << ", |S1| = " << check.schedule.s1 << ", |S2| = " << check.schedule.s2
      << '\n';
  out << "sigma_hat = " << format_number(r.estimates.sigma)
      << ", L_hat = " << format_number(r.estimates.lipschitz) << '\n';
  out << "k,measured,bound,sum_sq_dist\n";
  for (std::size_t k = 0; k < r.bound.size(); ++k) {
    out << k << ',' << format_number(r.mean_sq_error[k]) << ','
        << format_number(r.bound[k]) << ','
        << format_number(r.cumulative_sq_distance[k]) << '\n';
  }
  out << "worst measured/bound = " << format_number(check.worst_ratio)
      << " (allowed " << format_number(check.inflation) << ")\n";
  if (!check.pass) {
    err << "variance check failed: measured error exceeds the bound\n";
    return 1;
  }
  return 0;
}

int cmd_plot(const std::string& dir, std::ostream& out, std::ostream& err) {
  const std::regex pattern(R"((.+)_seed(\d+)\.csv)");
  std::map<std::string, std::vector<fs::path>> groups;
  std::error_code ec;
  if (fs::is_directory(dir, ec)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      std::smatch m;
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && std::regex_match(name, m, pattern)) {
        groups[m[1]].push_back(entry.path());
      }
    }
  }
  if (groups.empty()) {
    err << "error: no trace files matching <optimizer>_seed<N>.csv in " << dir
        << '\n';
    return 1;
  }

  bool runset_min = false;
  const fs::path agg_path = fs::path(dir) / "aggregate.csv";
  std::ofstream agg(agg_path);
  agg << "optimizer,ifo,ifo_per_n,median_subopt,median_elapsed_s,seeds\n";
  for (auto& [optimizer, files] : groups) {
    std::sort(files.begin(), files.end());
    std::vector<std::vector<TraceRow>> runs;
    for (const fs::path& f : files) {
      std::ifstream in(f);
      try {
        TraceFile t = read_trace(in);
        runset_min = runset_min || t.header == kTraceHeaderRunsetMin;
        runs.push_back(std::move(t.rows));
      } catch (const std::exception& e) {
        err << "error: " << f.string() << ": " << e.what() << '\n';
        return 1;
      }
    }
    for (const AggregatePoint& p : aggregate_median(runs)) {
      agg << optimizer << ',' << p.ifo << ',' << format_number(p.ifo_per_n) << ','
          << format_number(p.median_subopt) << ','
          << format_number(p.median_elapsed_s) << ',' << p.seeds << '\n';
    }
  }

  const fs::path script = fs::path(dir) / "plot.py";
  std::ofstream py(script);
  py << R"(#!/usr/bin/env python3
# Median sub-optimality over seeds vs. IFO/n and vs. wall-clock seconds.
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
curves = {}
with open(os.path.join(here, "aggregate.csv")) as f:
    for row in csv.DictReader(f):
        c = curves.setdefault(row["optimizer"], ([], [], []))
        y = float(row["median_subopt"])
        if y != y:
            continue
        c[0].append(float(row["ifo_per_n"]))
        c[1].append(float(row["median_elapsed_s"]))
        c[2].append(max(y, 1e-16))

fig, (ax_ifo, ax_time) = plt.subplots(1, 2, figsize=(10, 4))
for name, (ifo, secs, sub) in sorted(curves.items()):
    ax_ifo.semilogy(ifo, sub, label=name)
    ax_time.semilogy(secs, sub, label=name)
)" << "ylabel = \""
     << (runset_min ? "objective - run-set minimum" : "f(x) - f*") << "\"\n"
     << R"(ax_ifo.set_xlabel("IFO / n")
ax_time.set_xlabel("seconds")
for ax in (ax_ifo, ax_time):
    ax.set_ylabel(ylabel)
    ax.legend()
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "subopt.png")
fig.savefig(out, dpi=150)
print("wrote", out)
)";
  out << "wrote " << agg_path.string() << " and " << script.string() << " ("
      << groups.size() << " curve" << (groups.size() == 1 ? "" : "s") << ")\n";
  return 0;
}

}  // namespace rspider::bench
