// Budget-limited multi-armed bandit model.
//
// Each pull of arm i costs c_i currency units and yields a reward drawn from a
// Gaussian truncated to [0, support_hi]. Pulls continue until the residual
// budget can no longer pay for the cheapest arm.

#ifndef BB_BANDIT_HPP
#define BB_BANDIT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bb/knapsack.hpp"
#include "bb/rng.hpp"

namespace bb {

using ArmIndex = std::size_t;

struct ArmSpec {
  std::int64_t cost = 1;
  double mean = 0.0;
  double variance = 0.0;  // of the Gaussian before truncation; 0 = deterministic
  double support_hi = 0.0;

  /// Arm following the reference protocol: variance mean/2, support [0, 2 mean].
  static ArmSpec protocol(std::int64_t cost, double mean) {
    return ArmSpec{cost, mean, mean / 2.0, 2.0 * mean};
  }

  void validate() const {
    if (cost < 1) throw std::invalid_argument("arm: cost must be >= 1");
    if (!(mean > 0.0)) throw std::invalid_argument("arm: mean must be positive");
    if (!(variance >= 0.0)) throw std::invalid_argument("arm: variance must be >= 0");
    if (!(support_hi > 0.0)) throw std::invalid_argument("arm: support_hi must be positive");
    if (mean > support_hi) throw std::invalid_argument("arm: mean lies above support_hi");
  }
};

struct BanditInstance {
  std::vector<ArmSpec> arms;
  std::int64_t budget = 0;
  double reward_cap = 0.0;

  std::size_t size() const { return arms.size(); }

  std::int64_t min_cost() const {
    std::int64_t c = std::numeric_limits<std::int64_t>::max();
    for (const auto& a : arms) c = std::min(c, a.cost);
    return c;
  }

  std::vector<std::int64_t> costs() const {
    std::vector<std::int64_t> out;
    out.reserve(arms.size());
    for (const auto& a : arms) out.push_back(a.cost);
    return out;
  }

  void validate() const {
    if (arms.size() < 2) throw std::invalid_argument("instance: need at least 2 arms");
    if (budget < 0) throw std::invalid_argument("instance: negative budget");
    for (const auto& a : arms) {
      a.validate();
      if (a.support_hi > reward_cap)
        throw std::invalid_argument("instance: reward_cap is below an arm's support_hi");
    }
  }

  /// Copy of this instance with a different budget.
  BanditInstance with_budget(std::int64_t b) const {
    BanditInstance out = *this;
    out.budget = b;
    return out;
  }
};

struct InstanceStats {
  ArmIndex best_density_arm = 0;
  double d_min = 0.0;
  std::int64_t c_min = 0;
  std::int64_t c_max = 0;
  std::int64_t c_best = 0;  // cost of best_density_arm
  std::vector<double> delta;  // c_j - c_best
  std::vector<double> gap;    // mu_best - mu_j, normalized by reward_cap
};

struct PullOutcome {
  ArmIndex arm = 0;
  double reward = 0.0;
  std::int64_t cost = 0;
  std::int64_t time = 0;
};

struct TrialResult {
  double total_reward = 0.0;
  /// sum_i pulls_i * mean_i: the trial's expected reward given its pull counts.
  double expected_reward = 0.0;
  std::vector<std::int64_t> pulls;
  std::int64_t total_pulls = 0;
  std::int64_t spent = 0;

  bool operator==(const TrialResult&) const = default;
};

inline constexpr int kMaxRejections = 1'000'000;

/// One reward from N(mean, variance) conditioned on [0, support_hi], by rejection.
template <class URBG>
double sample_reward(const ArmSpec& arm, URBG& rng) {
  if (arm.variance == 0.0) return std::clamp(arm.mean, 0.0, arm.support_hi);
  std::normal_distribution<double> gauss(arm.mean, std::sqrt(arm.variance));
  for (int i = 0; i < kMaxRejections; ++i) {
    const double r = gauss(rng);
    if (r >= 0.0 && r <= arm.support_hi) return r;
  }
  throw std::logic_error("sample_reward: rejection sampler did not terminate");
}

inline InstanceStats instance_stats(const BanditInstance& inst) {
  const std::size_t k = inst.size();
  if (k < 2) throw std::invalid_argument("instance_stats: need at least 2 arms");

  std::vector<double> mu(k);
  for (std::size_t i = 0; i < k; ++i) mu[i] = inst.arms[i].mean / inst.reward_cap;

  InstanceStats s;
  s.c_min = inst.arms[0].cost;
  s.c_max = inst.arms[0].cost;
  double best_density = mu[0] / static_cast<double>(inst.arms[0].cost);
  for (std::size_t i = 1; i < k; ++i) {
    const double d = mu[i] / static_cast<double>(inst.arms[i].cost);
    if (d > best_density) {
      best_density = d;
      s.best_density_arm = i;
    }
    s.c_min = std::min(s.c_min, inst.arms[i].cost);
    s.c_max = std::max(s.c_max, inst.arms[i].cost);
  }

  const ArmIndex best = s.best_density_arm;
  s.c_best = inst.arms[best].cost;
  s.d_min = std::numeric_limits<double>::infinity();
  s.delta.resize(k);
  s.gap.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    s.delta[j] = static_cast<double>(inst.arms[j].cost - inst.arms[best].cost);
    s.gap[j] = mu[best] - mu[j];
    if (j != best)
      s.d_min = std::min(s.d_min, best_density - mu[j] / static_cast<double>(inst.arms[j].cost));
  }
  return s;
}

enum class OptimumMode { exact, fractional };

/// Full-information optimum in raw reward units: the unbounded knapsack over
/// true means (exact), or its fractional relaxation B * mu* / c*.
inline double optimal_expected_value(const BanditInstance& inst, OptimumMode mode,
                                     std::int64_t dp_cell_limit = kDefaultDpCellLimit) {
  UnboundedKnapsackProblem p;
  p.capacity = inst.budget;
  for (const auto& a : inst.arms) {
    p.values.push_back(a.mean);
    p.weights.push_back(a.cost);
  }
  if (mode == OptimumMode::fractional) return lp_upper_bound(p);
  return solve_exact_dp(p, dp_cell_limit).total_value;
}

/// Which per-trial reward enters the regret average.
enum class RewardEstimator {
  realized,  // total_reward
  expected,  // sum_i N_i mu_i
};

inline double regret(double optimum, std::span<const TrialResult> trials,
                     RewardEstimator est = RewardEstimator::realized) {
  if (trials.empty()) throw std::invalid_argument("regret: no trials");
  double sum = 0.0;
  for (const auto& t : trials)
    sum += est == RewardEstimator::realized ? t.total_reward : t.expected_reward;
  return optimum - sum / static_cast<double>(trials.size());
}

}  // namespace bb

#endif  // BB_BANDIT_HPP
