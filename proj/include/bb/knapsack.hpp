// Unbounded knapsack solvers.
//
// Three approximation levels are provided, all with lowest-index tie-breaking:
//   solve_fractional_floor  floor(C / w*) copies of the densest item only
//   solve_density_greedy    fill densest-first, one round per item type
//   solve_exact_dp          O(C * K) dynamic program, exact
// plus lp_upper_bound, the value of the fractional relaxation.
//
// For every problem the values satisfy
//   fractional_floor <= greedy <= exact <= lp_upper_bound.

#ifndef BB_KNAPSACK_HPP
#define BB_KNAPSACK_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace bb {

struct UnboundedKnapsackProblem {
  std::vector<double> values;
  std::vector<std::int64_t> weights;
  std::int64_t capacity = 0;

  std::size_t size() const { return values.size(); }

  void validate() const {
    if (values.empty()) throw std::invalid_argument("knapsack: no item types");
    if (values.size() != weights.size())
      throw std::invalid_argument("knapsack: values and weights differ in length");
    if (capacity < 0) throw std::invalid_argument("knapsack: negative capacity");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (weights[i] < 1)
        throw std::invalid_argument("knapsack: weight of item " + std::to_string(i) +
                                    " is below 1");
      if (!(values[i] >= 0.0))
        throw std::invalid_argument("knapsack: value of item " + std::to_string(i) +
                                    " is negative or NaN");
    }
  }
};

struct KnapsackSolution {
  std::vector<std::int64_t> counts;
  double total_value = 0.0;
  std::int64_t total_weight = 0;

  std::int64_t total_count() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  }
};

inline double item_density(double value, std::int64_t weight) {
  return value / static_cast<double>(weight);
}

namespace detail {

inline KnapsackSolution make_solution(const UnboundedKnapsackProblem& p,
                                      std::vector<std::int64_t> counts) {
  KnapsackSolution s;
  s.counts = std::move(counts);
  for (std::size_t i = 0; i < p.size(); ++i) {
    s.total_value += static_cast<double>(s.counts[i]) * p.values[i];
    s.total_weight += s.counts[i] * p.weights[i];
  }
  return s;
}

}  // namespace detail

/// Index of the densest item; ties resolve to the lowest index.
inline std::size_t densest_item(const UnboundedKnapsackProblem& p) {
  std::size_t best = 0;
  double best_density = item_density(p.values[0], p.weights[0]);
  for (std::size_t i = 1; i < p.size(); ++i) {
    const double d = item_density(p.values[i], p.weights[i]);
    if (d > best_density) {
      best = i;
      best_density = d;
    }
  }
  return best;
}

/// Item indices ordered by density, descending; equal densities keep index order.
inline std::vector<std::size_t> density_order(const UnboundedKnapsackProblem& p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return item_density(p.values[a], p.weights[a]) > item_density(p.values[b], p.weights[b]);
  });
  return order;
}

/// Density-ordered greedy. Each item type is visited once in density order and
/// takes as many units as the residual capacity allows, so the result is
/// maximal: the leftover capacity is smaller than every weight.
inline KnapsackSolution solve_density_greedy(const UnboundedKnapsackProblem& p) {
  p.validate();
  std::vector<std::int64_t> counts(p.size(), 0);
  std::int64_t residual = p.capacity;
  for (std::size_t i : density_order(p)) {
    if (p.weights[i] <= residual) {
      counts[i] = residual / p.weights[i];
      residual -= counts[i] * p.weights[i];
    }
  }
  return detail::make_solution(p, std::move(counts));
}

inline KnapsackSolution solve_fractional_floor(const UnboundedKnapsackProblem& p) {
  p.validate();
  std::vector<std::int64_t> counts(p.size(), 0);
  const std::size_t best = densest_item(p);
  counts[best] = p.capacity / p.weights[best];
  return detail::make_solution(p, std::move(counts));
}

inline double lp_upper_bound(const UnboundedKnapsackProblem& p) {
  p.validate();
  const std::size_t best = densest_item(p);
  return static_cast<double>(p.capacity) * item_density(p.values[best], p.weights[best]);
}

inline constexpr std::int64_t kDefaultDpCellLimit = 10'000'000;

class DpTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Exact unbounded knapsack by dynamic programming over capacities.
///
/// best[c] is the optimum with capacity c. Reconstruction walks back from C and
/// prefers, at every capacity, leaving a unit unused over taking an item, then
/// the lowest item index, so equal-value optima resolve deterministically.
/// Throws DpTooLarge when (C + 1) * K exceeds `cell_limit`.
inline KnapsackSolution solve_exact_dp(const UnboundedKnapsackProblem& p,
                                       std::int64_t cell_limit = kDefaultDpCellLimit) {
  p.validate();
  const auto k = static_cast<std::int64_t>(p.size());
  if (p.capacity + 1 > cell_limit / k)
    throw DpTooLarge("knapsack: exact DP needs " + std::to_string((p.capacity + 1) * k) +
                     " cells, limit is " + std::to_string(cell_limit));

  const auto cap = static_cast<std::size_t>(p.capacity);
  std::vector<double> best(cap + 1, 0.0);
  // -1 = capacity c is solved as well by c - 1.
  std::vector<std::int32_t> choice(cap + 1, -1);
  for (std::size_t c = 1; c <= cap; ++c) {
    double v = best[c - 1];
    std::int32_t pick = -1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto w = static_cast<std::size_t>(p.weights[i]);
      if (w > c) continue;
      const double cand = best[c - w] + p.values[i];
      // Relative slack so round-off in the sums does not flip ties away from
      // the lower index.
      if (cand > v + 1e-12 * std::max(1.0, std::abs(v))) {
        v = cand;
        pick = static_cast<std::int32_t>(i);
      }
    }
    best[c] = v;
    choice[c] = pick;
  }

  std::vector<std::int64_t> counts(p.size(), 0);
  std::size_t c = cap;
  while (c > 0) {
    if (choice[c] < 0) {
      --c;
    } else {
      const auto i = static_cast<std::size_t>(choice[c]);
      ++counts[i];
      c -= static_cast<std::size_t>(p.weights[i]);
    }
  }
  return detail::make_solution(p, std::move(counts));
}

}  // namespace bb

#endif  // BB_KNAPSACK_HPP
