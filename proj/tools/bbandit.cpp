// bbandit: command-line front end for the budget-limited bandit toolkit.
//
//   bbandit run    --config cfg.json [--out results.csv] [--set key=value]... [--jobs N]
//   bbandit sweep  --config cfg.json [--out results.csv] [--set key=value]... [--jobs N]
//   bbandit bound  --config cfg.json [--csv results.csv] [--set key=value]...
//   bbandit oracle-check [--instances N] [--seed S]
//
// BB_SEED, when set, replaces master_seed from the config file; --set still wins.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bb/commands.hpp"
#include "bb/config.hpp"

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("BB_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw bb::ConfigError(std::string("BB_SEED: not a non-negative integer: '") + s + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-limited multi-armed bandit experiments (KUBE, fractional KUBE, epsilon-first)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "results.csv";
  std::vector<std::string> overrides;
  unsigned jobs = bb::default_jobs();
  std::string csv_path;
  std::int64_t instances = 1000;
  std::uint64_t seed = 1;

  auto add_config_opts = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "override a config key, key=value (repeatable)");
  };

  auto* run = app.add_subcommand("run", "run one policies x budgets grid and write a CSV");
  add_config_opts(run);
  run->add_option("--out", out_path, "output CSV path");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "run the grid for the homogeneous, moderate and extreme cost regimes");
  add_config_opts(sweep);
  sweep->add_option("--out", out_path, "output CSV path; the regime name is appended before the extension");
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* bound = app.add_subcommand("bound", "print the closed-form regret bounds for the config's instance");
  add_config_opts(bound);
  bound->add_option("--csv", csv_path, "results CSV to compare against")->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle-check", "randomized consistency check of the knapsack solvers");
  oracle->add_option("--instances,-n", instances, "number of random instances");
  auto* seed_opt = oracle->add_option("--seed", seed, "random seed (default: BB_SEED or 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed()) {
      if (seed_opt->count() == 0) {
        if (auto s = env_seed()) seed = *s;
      }
      return bb::cmd_oracle_check(instances, seed, std::cout, std::cerr);
    }

    const bb::ExperimentConfig cfg = bb::parse_config(config_path, overrides, env_seed());
    if (run->parsed()) return bb::cmd_run(cfg, out_path, jobs, std::cout, std::cerr);
    if (sweep->parsed()) return bb::cmd_sweep(cfg, out_path, jobs, std::cout, std::cerr);
    if (bound->parsed())
      return bb::cmd_bound(cfg, csv_path.empty() ? std::nullopt : std::optional(csv_path),
                           std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
