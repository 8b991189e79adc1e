// Arm-selection policies for the budget-limited bandit.
//
//   Kube            solves the UCB-valued unbounded knapsack over the residual
//                   budget with the density-ordered greedy and samples the next
//                   arm in proportion to its multiplicity in that solution.
//   FractionalKube  pulls the affordable arm with the highest UCB density.
//   EpsilonFirst    spends epsilon * B on round-robin exploration, then follows
//                   the greedy knapsack plan built from the plain mean estimates.
//
// Policies see rewards normalized to [0, 1]. A policy object is single-use:
// create a fresh one for every trial.

#ifndef BB_POLICIES_HPP
#define BB_POLICIES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "bb/bandit.hpp"
#include "bb/knapsack.hpp"
#include "bb/rng.hpp"

namespace bb {

/// Per-trial learner state: pull counts, reward estimates, time and residual budget.
struct PolicyState {
  std::vector<std::int64_t> costs;
  std::vector<std::int64_t> n;
  std::vector<double> reward_sum;
  std::vector<double> mean_est;
  std::int64_t t = 0;
  std::int64_t budget = 0;
  std::int64_t residual = 0;
  std::int64_t c_min = 0;

  PolicyState() = default;
  PolicyState(std::vector<std::int64_t> arm_costs, std::int64_t total_budget)
      : costs(std::move(arm_costs)),
        n(costs.size(), 0),
        reward_sum(costs.size(), 0.0),
        mean_est(costs.size(), 0.0),
        budget(total_budget),
        residual(total_budget),
        c_min(costs.empty() ? 0 : *std::min_element(costs.begin(), costs.end())) {}

  std::size_t size() const { return costs.size(); }
  bool affordable(ArmIndex i) const { return costs[i] <= residual; }
  bool feasible() const { return !costs.empty() && residual >= c_min; }

  /// Charges the arm's cost and folds a normalized reward into its estimate.
  void record(ArmIndex arm, double normalized_reward) {
    ++n[arm];
    reward_sum[arm] += normalized_reward;
    mean_est[arm] = reward_sum[arm] / static_cast<double>(n[arm]);
    ++t;
    residual -= costs[arm];
  }
};

struct ActionDistribution {
  std::vector<double> probs;
};

/// Upper confidence bound on an arm's reward density (reward per unit cost):
/// (mean + sqrt(2 ln t / n)) / c.
inline double ucb_density_index(double mean_est, std::int64_t n, std::int64_t t, std::int64_t cost) {
  if (n < 1) throw std::invalid_argument("ucb_density_index: arm has not been pulled");
  if (t < n) throw std::invalid_argument("ucb_density_index: t is below n");
  const double bonus = std::sqrt(2.0 * std::log(static_cast<double>(t)) / static_cast<double>(n));
  return (mean_est + bonus) / static_cast<double>(cost);
}

/// Per-pull UCB value mean + sqrt(2 ln t / n), the knapsack item value used by Kube.
inline double ucb_value(const PolicyState& s, ArmIndex i) {
  return ucb_density_index(s.mean_est[i], s.n[i], s.t, 1);
}

/// KUBE's randomized action: solve the unbounded knapsack with UCB values over
/// the residual budget and weight every arm by its multiplicity. Arms never
/// pulled are left out. Empty when no pulled arm fits the residual budget.
inline std::optional<ActionDistribution> kube_action_distribution(const PolicyState& s) {
  if (!s.feasible()) return std::nullopt;
  UnboundedKnapsackProblem p;
  p.capacity = s.residual;
  std::vector<ArmIndex> arm_of;
  for (ArmIndex i = 0; i < s.size(); ++i) {
    if (s.n[i] < 1) continue;
    arm_of.push_back(i);
    p.values.push_back(ucb_value(s, i));
    p.weights.push_back(s.costs[i]);
  }
  if (arm_of.empty()) return std::nullopt;

  const KnapsackSolution sol = solve_density_greedy(p);
  const std::int64_t total = sol.total_count();
  if (total == 0) return std::nullopt;

  ActionDistribution d{std::vector<double>(s.size(), 0.0)};
  for (std::size_t j = 0; j < arm_of.size(); ++j)
    d.probs[arm_of[j]] = static_cast<double>(sol.counts[j]) / static_cast<double>(total);
  return d;
}

/// Inverse-CDF draw over arm indices in ascending order.
template <class URBG>
ArmIndex sample_action(const ActionDistribution& d, URBG& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double cdf = 0.0;
  ArmIndex last_positive = 0;
  for (ArmIndex i = 0; i < d.probs.size(); ++i) {
    if (d.probs[i] <= 0.0) continue;
    cdf += d.probs[i];
    last_positive = i;
    if (u < cdf) return i;
  }
  // Round-off left the cumulative sum a hair below u.
  return last_positive;
}

template <class URBG>
std::optional<ArmIndex> kube_select(const PolicyState& s, URBG& rng) {
  auto d = kube_action_distribution(s);
  if (!d) return std::nullopt;
  return sample_action(*d, rng);
}

/// Affordable pulled arm with the highest UCB density; ties go to the lowest index.
inline std::optional<ArmIndex> fractional_kube_select(const PolicyState& s) {
  std::optional<ArmIndex> best;
  double best_index = 0.0;
  for (ArmIndex i = 0; i < s.size(); ++i) {
    if (s.n[i] < 1 || !s.affordable(i)) continue;
    const double idx = ucb_density_index(s.mean_est[i], s.n[i], s.t, s.costs[i]);
    if (!best || idx > best_index) {
      best = i;
      best_index = idx;
    }
  }
  return best;
}

/// One pass over the arms in index order, pulling each once. Arms the residual
/// budget cannot pay for when their turn comes are skipped for good.
class InitialSweep {
 public:
  std::optional<ArmIndex> next(const PolicyState& s) {
    while (cursor_ < s.size()) {
      const ArmIndex i = cursor_++;
      if (s.affordable(i)) return i;
    }
    return std::nullopt;
  }

 private:
  ArmIndex cursor_ = 0;
};

class Kube {
 public:
  static constexpr std::string_view kName = "kube";

  template <class URBG>
  std::optional<ArmIndex> next_action(const PolicyState& s, URBG& rng) {
    if (auto a = sweep_.next(s)) return a;
    return kube_select(s, rng);
  }

 private:
  InitialSweep sweep_;
};

class FractionalKube {
 public:
  static constexpr std::string_view kName = "fkube";

  template <class URBG>
  std::optional<ArmIndex> next_action(const PolicyState& s, URBG&) {
    if (auto a = sweep_.next(s)) return a;
    return fractional_kube_select(s);
  }

 private:
  InitialSweep sweep_;
};

/// Budget-limited epsilon-first.
///
/// Exploration pulls arms round-robin while the next pull still fits into the
/// exploration allowance epsilon * B; the first arm that would overrun it ends
/// the phase. Exploitation solves the greedy knapsack with the plain mean
/// estimates over the residual budget and plays the plan arm by arm in index
/// order, re-planning if the plan runs out while budget remains.
class EpsilonFirst {
 public:
  explicit EpsilonFirst(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw std::invalid_argument("efirst: epsilon must lie in (0, 1)");
  }

  double epsilon() const { return epsilon_; }

  template <class URBG>
  std::optional<ArmIndex> next_action(const PolicyState& s, URBG&) {
    if (exploring_) {
      const ArmIndex i = cursor_ % s.size();
      const std::int64_t spent = s.budget - s.residual;
      if (static_cast<double>(spent + s.costs[i]) <= epsilon_ * static_cast<double>(s.budget)) {
        ++cursor_;
        return i;
      }
      exploring_ = false;
    }
    if (plan_remaining() == 0) replan(s);
    while (plan_cursor_ < plan_.size() && plan_[plan_cursor_] == 0) ++plan_cursor_;
    if (plan_cursor_ == plan_.size()) return std::nullopt;
    --plan_[plan_cursor_];
    return plan_cursor_;
  }

  bool exploring() const { return exploring_; }

 private:
  std::int64_t plan_remaining() const {
    std::int64_t r = 0;
    for (auto c : plan_) r += c;
    return r;
  }

  void replan(const PolicyState& s) {
    UnboundedKnapsackProblem p{s.mean_est, s.costs, s.residual};
    plan_ = solve_density_greedy(p).counts;
    plan_cursor_ = 0;
  }

  double epsilon_;
  bool exploring_ = true;
  std::size_t cursor_ = 0;
  std::vector<std::int64_t> plan_;
  std::size_t plan_cursor_ = 0;
};

using AnyPolicy = std::variant<Kube, FractionalKube, EpsilonFirst>;

/// Parses `kube`, `fkube` or `efirst:<epsilon>`.
inline AnyPolicy make_policy(std::string_view id) {
  if (id == Kube::kName) return Kube{};
  if (id == FractionalKube::kName) return FractionalKube{};
  constexpr std::string_view prefix = "efirst:";
  if (id.substr(0, prefix.size()) == prefix) {
    const std::string num(id.substr(prefix.size()));
    std::size_t used = 0;
    double eps = 0.0;
    try {
      eps = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (num.empty() || used != num.size())
      throw std::invalid_argument("policy '" + std::string(id) + "': epsilon is not a number");
    return EpsilonFirst(eps);
  }
  throw std::invalid_argument("unknown policy '" + std::string(id) +
                              "' (expected kube, fkube or efirst:<epsilon>)");
}

/// Next arm to pull, or nullopt once the residual budget is below the cheapest cost.
template <class Policy, class URBG>
std::optional<ArmIndex> next_action(Policy& policy, const PolicyState& s, URBG& rng) {
  if (!s.feasible()) return std::nullopt;
  if constexpr (std::is_same_v<Policy, AnyPolicy>) {
    return std::visit([&](auto& p) { return p.next_action(s, rng); }, policy);
  } else {
    return policy.next_action(s, rng);
  }
}

}  // namespace bb

#endif  // BB_POLICIES_HPP
