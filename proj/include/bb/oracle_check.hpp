// Randomized consistency check of the knapsack solvers.
//
// For each random problem (K <= 8, C <= 200, values in [0, 10], weights in
// [1, 10]) it verifies
//   fractional_floor <= greedy <= exact_dp <= lp_upper_bound,
//   greedy >= exact_dp - max value,
//   exact_dp == exhaustive enumeration,
// and that every solution is feasible and maximal where required.

#ifndef BB_ORACLE_CHECK_HPP
#define BB_ORACLE_CHECK_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bb/knapsack.hpp"
#include "bb/rng.hpp"

namespace bb {

/// Optimal value by enumerating every count of every item type, memoized on
/// (item, remaining capacity). Shares no code with solve_exact_dp.
inline double enumerate_knapsack_value(const UnboundedKnapsackProblem& p) {
  const std::size_t k = p.size();
  const auto cap = static_cast<std::size_t>(p.capacity);
  // memo[i][c]: best value from items i.. with capacity c; negative = unknown.
  std::vector<std::vector<double>> memo(k + 1, std::vector<double>(cap + 1, -1.0));
  std::function<double(std::size_t, std::int64_t)> go = [&](std::size_t i, std::int64_t c) {
    if (i == k) return 0.0;
    double& slot = memo[i][static_cast<std::size_t>(c)];
    if (slot >= 0.0) return slot;
    double best = 0.0;
    for (std::int64_t x = 0; x * p.weights[i] <= c; ++x)
      best = std::max(best, static_cast<double>(x) * p.values[i] + go(i + 1, c - x * p.weights[i]));
    return slot = best;
  };
  return go(0, p.capacity);
}

template <class URBG>
UnboundedKnapsackProblem random_knapsack(URBG& rng, std::size_t max_items = 8,
                                         std::int64_t max_capacity = 200) {
  std::uniform_int_distribution<std::size_t> items(1, max_items);
  std::uniform_int_distribution<std::int64_t> capacity(0, max_capacity);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  std::uniform_int_distribution<std::int64_t> weight(1, 10);
  UnboundedKnapsackProblem p;
  const std::size_t k = items(rng);
  for (std::size_t i = 0; i < k; ++i) {
    p.values.push_back(value(rng));
    p.weights.push_back(weight(rng));
  }
  p.capacity = capacity(rng);
  return p;
}

inline std::string describe(const UnboundedKnapsackProblem& p) {
  std::ostringstream os;
  os.precision(17);
  os << "values=(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p.values[i];
  os << ") weights=(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p.weights[i];
  os << ") capacity=" << p.capacity;
  return os.str();
}

struct OracleReport {
  std::int64_t checked = 0;
  bool passed = true;
  std::string counterexample;  // first failing instance and the violated property
};

using GreedySolver = std::function<KnapsackSolution(const UnboundedKnapsackProblem&)>;

/// Returns the first violated property for `p`, or an empty string.
inline std::string check_knapsack_chain(const UnboundedKnapsackProblem& p,
                                        const GreedySolver& greedy = solve_density_greedy) {
  constexpr double tol = 1e-9;
  const auto floor_sol = solve_fractional_floor(p);
  const auto greedy_sol = greedy(p);
  const auto exact_sol = solve_exact_dp(p);
  const double lp = lp_upper_bound(p);
  const double brute = enumerate_knapsack_value(p);
  const double max_v = *std::max_element(p.values.begin(), p.values.end());
  const std::int64_t min_w = *std::min_element(p.weights.begin(), p.weights.end());

  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  for (const auto* s : {&floor_sol, &greedy_sol, &exact_sol})
    if (s->total_weight > p.capacity) return "infeasible solution";
  if (p.capacity - greedy_sol.total_weight >= min_w) return "greedy solution is not maximal";
  if (floor_sol.total_value > greedy_sol.total_value + tol)
    return "fractional_floor " + num(floor_sol.total_value) + " > greedy " +
           num(greedy_sol.total_value);
  if (greedy_sol.total_value > exact_sol.total_value + tol)
    return "greedy " + num(greedy_sol.total_value) + " > exact " + num(exact_sol.total_value);
  if (exact_sol.total_value > lp + tol)
    return "exact " + num(exact_sol.total_value) + " > lp bound " + num(lp);
  if (greedy_sol.total_value < exact_sol.total_value - max_v - tol)
    return "greedy " + num(greedy_sol.total_value) + " < exact - max value " +
           num(exact_sol.total_value - max_v);
  if (std::abs(exact_sol.total_value - brute) > tol * std::max(1.0, brute))
    return "exact " + num(exact_sol.total_value) + " != enumeration " + num(brute);
  return {};
}

inline OracleReport run_oracle_check(std::int64_t n_instances, std::uint64_t seed,
                                     const GreedySolver& greedy = solve_density_greedy) {
  OracleReport report;
  Rng rng(seed);
  for (std::int64_t i = 0; i < n_instances; ++i) {
    const auto p = random_knapsack(rng);
    ++report.checked;
    if (auto why = check_knapsack_chain(p, greedy); !why.empty()) {
      report.passed = false;
      report.counterexample = "instance " + std::to_string(i) + ": " + describe(p) + ": " + why;
      return report;
    }
  }
  return report;
}

}  // namespace bb

#endif  // BB_ORACLE_CHECK_HPP
