// Monte-Carlo experiment harness.
//
// One bandit instance is drawn from the master seed and shared by every cell.
// For each (policy, budget) pair the harness runs `trials` independent trials,
// each seeded by trial_seed(master_seed, policy, budget, trial), and folds them
// into an AggregateRow. Cells run on a thread pool; the fold happens after the
// join in a fixed order, so output does not depend on scheduling.

#ifndef BB_EXPERIMENT_HPP
#define BB_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bb/bandit.hpp"
#include "bb/policies.hpp"
#include "bb/rng.hpp"
#include "bb/trial.hpp"

namespace bb {

enum class Baseline {
  exact,       // exact knapsack optimum on the true means
  fractional,  // B * mu* / c*
  automatic,   // exact up to kAutoExactBudget, fractional above
};

inline constexpr std::int64_t kAutoExactBudget = 10'000;

inline const char* to_string(Baseline b) {
  switch (b) {
    case Baseline::exact: return "exact";
    case Baseline::fractional: return "fractional";
    case Baseline::automatic: return "auto";
  }
  return "?";
}

inline const char* to_string(RewardEstimator e) {
  return e == RewardEstimator::realized ? "realized" : "expected";
}

struct IntInterval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ExperimentConfig {
  std::int64_t k = 10;
  IntInterval cost_interval{1, 10};
  RealInterval mean_interval{10.0, 20.0};
  std::vector<std::int64_t> budgets;
  std::int64_t trials = 100;
  std::vector<std::string> policies;
  std::uint64_t master_seed = 1;
  Baseline baseline = Baseline::exact;
  RewardEstimator estimator = RewardEstimator::realized;

  void validate() const {
    if (k < 2) throw std::invalid_argument("config: k must be at least 2");
    if (cost_interval.lo < 1) throw std::invalid_argument("config: cost_interval lower end must be >= 1");
    if (cost_interval.lo > cost_interval.hi)
      throw std::invalid_argument("config: cost_interval [" + std::to_string(cost_interval.lo) +
                                  ", " + std::to_string(cost_interval.hi) + "] is inverted");
    if (!(mean_interval.lo > 0.0))
      throw std::invalid_argument("config: mean_interval lower end must be positive");
    if (mean_interval.lo > mean_interval.hi)
      throw std::invalid_argument("config: mean_interval is inverted");
    if (budgets.empty()) throw std::invalid_argument("config: budgets is empty");
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      if (budgets[i] < 1) throw std::invalid_argument("config: budgets must be positive");
      if (i > 0 && budgets[i] <= budgets[i - 1])
        throw std::invalid_argument("config: budgets must be strictly ascending");
    }
    if (trials < 2) throw std::invalid_argument("config: trials must be at least 2");
    if (policies.empty()) throw std::invalid_argument("config: policies is empty");
    for (const auto& p : policies) (void)make_policy(p);
  }
};

/// Pulling-cost ranges of the three reference scenarios.
enum class CostRegime { homogeneous, moderate, extreme };

inline constexpr CostRegime kAllRegimes[] = {CostRegime::homogeneous, CostRegime::moderate,
                                             CostRegime::extreme};

inline IntInterval cost_interval(CostRegime r) {
  switch (r) {
    case CostRegime::homogeneous: return {5, 10};
    case CostRegime::moderate: return {1, 10};
    case CostRegime::extreme: return {1, 20};
  }
  return {1, 1};
}

inline const char* to_string(CostRegime r) {
  switch (r) {
    case CostRegime::homogeneous: return "homogeneous";
    case CostRegime::moderate: return "moderate";
    case CostRegime::extreme: return "extreme";
  }
  return "?";
}

struct AggregateRow {
  std::string policy;
  std::int64_t budget = 0;
  std::int64_t trials = 0;
  double mean_reward = 0.0;
  double mean_regret = 0.0;
  double regret_ci95 = 0.0;
  double normalized_regret = 0.0;

  bool operator==(const AggregateRow&) const = default;
};

struct ExperimentResult {
  BanditInstance instance;
  std::vector<AggregateRow> rows;
};

/// Half-width of the normal-approximation 95% confidence interval of the mean.
inline double ci95(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("ci95: need at least 2 samples");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  return 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

/// K arms with integer costs uniform on cost_interval, means uniform on
/// mean_interval, variance mean/2 and support [0, 2 mean]. reward_cap is twice
/// the upper end of mean_interval; the budget is the largest configured one.
template <class URBG>
BanditInstance generate_instance(const ExperimentConfig& cfg, URBG& rng) {
  std::uniform_int_distribution<std::int64_t> cost(cfg.cost_interval.lo, cfg.cost_interval.hi);
  std::uniform_real_distribution<double> mean(cfg.mean_interval.lo, cfg.mean_interval.hi);
  BanditInstance inst;
  inst.arms.reserve(static_cast<std::size_t>(cfg.k));
  for (std::int64_t i = 0; i < cfg.k; ++i) {
    const std::int64_t c = cost(rng);
    inst.arms.push_back(ArmSpec::protocol(c, mean(rng)));
  }
  inst.budget = cfg.budgets.empty() ? 0 : cfg.budgets.back();
  inst.reward_cap = 2.0 * cfg.mean_interval.hi;
  return inst;
}

inline BanditInstance generate_instance(const ExperimentConfig& cfg) {
  Rng rng(cfg.master_seed);
  return generate_instance(cfg, rng);
}

inline double baseline_optimum(const BanditInstance& inst, Baseline b) {
  switch (b) {
    case Baseline::exact: return optimal_expected_value(inst, OptimumMode::exact);
    case Baseline::fractional: return optimal_expected_value(inst, OptimumMode::fractional);
    case Baseline::automatic:
      return optimal_expected_value(
          inst, inst.budget <= kAutoExactBudget ? OptimumMode::exact : OptimumMode::fractional);
  }
  return 0.0;
}

inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs every (policy, budget, trial) cell of `cfg` on `inst`.
inline std::vector<AggregateRow> run_experiment(const ExperimentConfig& cfg,
                                                const BanditInstance& inst,
                                                unsigned jobs = default_jobs()) {
  cfg.validate();
  inst.validate();

  const std::size_t n_pol = cfg.policies.size();
  const std::size_t n_bud = cfg.budgets.size();
  const auto n_trials = static_cast<std::size_t>(cfg.trials);

  // Optima first: a DP that does not fit should fail before any simulation.
  std::vector<double> optimum(n_bud);
  for (std::size_t b = 0; b < n_bud; ++b)
    optimum[b] = baseline_optimum(inst.with_budget(cfg.budgets[b]), cfg.baseline);

  std::vector<BanditInstance> by_budget;
  by_budget.reserve(n_bud);
  for (auto b : cfg.budgets) by_budget.push_back(inst.with_budget(b));

  const std::size_t n_cells = n_pol * n_bud * n_trials;
  std::vector<double> reward(n_cells);
  std::vector<double> realized(n_cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= n_cells) return;
      const std::size_t trial = cell % n_trials;
      const std::size_t b = (cell / n_trials) % n_bud;
      const std::size_t p = cell / (n_trials * n_bud);
      try {
        const auto seed = trial_seed(cfg.master_seed, cfg.policies[p], cfg.budgets[b],
                                     static_cast<std::int64_t>(trial));
        const TrialResult r = run_trial(make_policy(cfg.policies[p]), by_budget[b], seed);
        reward[cell] =
            cfg.estimator == RewardEstimator::realized ? r.total_reward : r.expected_reward;
        realized[cell] = r.total_reward;
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n_cells);
        return;
      }
    }
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_cells)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const double c_min = static_cast<double>(inst.min_cost());
  std::vector<AggregateRow> rows;
  rows.reserve(n_pol * n_bud);
  std::vector<double> regrets(n_trials);
  for (std::size_t p = 0; p < n_pol; ++p) {
    for (std::size_t b = 0; b < n_bud; ++b) {
      const std::size_t base = (p * n_bud + b) * n_trials;
      double reward_sum = 0.0;
      double realized_sum = 0.0;
      for (std::size_t t = 0; t < n_trials; ++t) {
        reward_sum += reward[base + t];
        realized_sum += realized[base + t];
        regrets[t] = optimum[b] - reward[base + t];
      }
      AggregateRow row;
      row.policy = cfg.policies[p];
      row.budget = cfg.budgets[b];
      row.trials = cfg.trials;
      row.mean_reward = realized_sum / static_cast<double>(n_trials);
      row.mean_regret = optimum[b] - reward_sum / static_cast<double>(n_trials);
      row.regret_ci95 = ci95(regrets);
      row.normalized_regret =
          row.mean_regret / std::log(static_cast<double>(row.budget) / c_min);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs = default_jobs()) {
  cfg.validate();
  ExperimentResult out;
  out.instance = generate_instance(cfg);
  out.rows = run_experiment(cfg, out.instance, jobs);
  return out;
}

inline constexpr const char* kCsvHeader =
    "policy,budget,trials,mean_reward,mean_regret,regret_ci95,normalized_regret";

inline std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// CSV text: a `# c_min=<v>` comment line, the header, then one line per row.
inline std::string to_csv(std::span<const AggregateRow> rows, std::int64_t c_min) {
  if (rows.empty()) throw std::invalid_argument("write_csv: no rows");
  std::ostringstream os;
  os << "# c_min=" << c_min << '\n' << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.policy << ',' << r.budget << ',' << r.trials << ',' << format_g6(r.mean_reward) << ','
       << format_g6(r.mean_regret) << ',' << format_g6(r.regret_ci95) << ','
       << format_g6(r.normalized_regret) << '\n';
  }
  return os.str();
}

inline void write_csv(std::span<const AggregateRow> rows, std::int64_t c_min,
                      const std::string& path) {
  const std::string text = to_csv(rows, c_min);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write_csv: write to '" + path + "' failed");
}

struct CsvTable {
  std::int64_t c_min = 0;  // 0 when the comment line is absent
  std::vector<AggregateRow> rows;
};

inline CsvTable parse_csv(std::istream& in, const std::string& origin = "<csv>") {
  CsvTable table;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# c_min=";
      if (line.rfind(key, 0) == 0) table.c_min = std::stoll(line.substr(key.size()));
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader)
        throw std::runtime_error(origin + ": unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7)
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": expected 7 fields");
    try {
      table.rows.push_back(AggregateRow{f[0], std::stoll(f[1]), std::stoll(f[2]), std::stod(f[3]),
                                        std::stod(f[4]), std::stod(f[5]), std::stod(f[6])});
    } catch (const std::logic_error&) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": malformed number");
    }
  }
  if (!header_seen) throw std::runtime_error(origin + ": missing header");
  return table;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
  return parse_csv(in, path);
}

}  // namespace bb

#endif  // BB_EXPERIMENT_HPP
