#include <CLI11.hpp>

#include <iostream>

#include "rspider/bench/commands.hpp"

using namespace rspider::bench;

int main(int argc, char** argv) {
  CLI::App app{"Riemannian SPIDER benchmark driver"};
  app.require_subcommand(1);

  Overrides overrides;
  std::uint64_t seed = 0;
  std::string budget;
  std::string out;
  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Run a single seed instead of run.seeds");
    cmd->add_option("--budget", budget, "IFO budget, e.g. 50000 or 50n");
    cmd->add_option("--out", out, "Output directory");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the optimizers listed in a config");
  run->add_option("config", config_path, "Experiment config")->required();
  add_overrides(run);

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  grad->add_option("config", config_path, "Experiment config")->required();
  add_overrides(grad);

  auto* var = app.add_subcommand("variance-check",
                                 "Monte-Carlo check of the estimator error bound");
  var->add_option("config", config_path, "Experiment config")->required();
  add_overrides(var);

  std::string trace_dir;
  auto* plot = app.add_subcommand("plot", "Aggregate traces and emit a plot script");
  plot->add_option("dir", trace_dir, "Directory with <optimizer>_seed<N>.csv")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (plot->parsed()) return cmd_plot(trace_dir, std::cout, std::cerr);

  RunConfig config;
  try {
    config = RunConfig::load(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  for (auto* cmd : {run, grad, var}) {
    if (!cmd->parsed()) continue;
    if (cmd->count("--seed")) overrides.seed = seed;
    if (cmd->count("--budget")) overrides.budget = budget;
    if (cmd->count("--out")) overrides.out = out;
  }
  apply_overrides(config, overrides);
  if (overrides.seed) config.set("variance", "seed", std::to_string(seed));

  if (run->parsed()) return cmd_run(config, std::cout, std::cerr);
  if (grad->parsed()) return cmd_gradcheck(config, std::cout, std::cerr);
  return cmd_variance_check(config, std::cout, std::cerr);
}
