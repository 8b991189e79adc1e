// Closed-form worst-case regret bounds for KUBE and fractional KUBE.
//
// With S = sum_{gap_j > 0} gap_j + sum_{delta_j > 0} delta_j / c_best,
//   kube:        (8 / d_min^2 + (c_max / c_min)^2) * S * ln(B / c_min) + S * (pi^2/3 + 1) + 1
//   fractional:  (8 / d_min^2)                     * S * ln(B / c_min) + S * (pi^2/3 + 1) + 1
// The value is in normalized reward units; multiply by reward_cap for raw units.

#ifndef BB_BOUND_HPP
#define BB_BOUND_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "bb/bandit.hpp"

namespace bb {

enum class BoundVariant { kube, fractional };

/// S in the formulas above. Positive whenever the best-density arm is unique,
/// since every other arm then has a positive gap or a positive cost difference.
inline double suboptimality_mass(const InstanceStats& s) {
  double sum = 0.0;
  for (std::size_t j = 0; j < s.gap.size(); ++j) {
    if (j == s.best_density_arm) continue;
    if (s.gap[j] > 0.0) sum += s.gap[j];
    if (s.delta[j] > 0.0) sum += s.delta[j] / static_cast<double>(s.c_best);
  }
  return sum;
}

inline double theorem_bound(const InstanceStats& s, std::int64_t budget, BoundVariant variant) {
  if (!(s.d_min > 0.0))
    throw std::domain_error("theorem_bound: d_min is 0, the best-density arm is not unique");
  const double mass = suboptimality_mass(s);
  double coeff = 8.0 / (s.d_min * s.d_min);
  if (variant == BoundVariant::kube) {
    const double ratio = static_cast<double>(s.c_max) / static_cast<double>(s.c_min);
    coeff += ratio * ratio;
  }
  const double log_term = std::log(static_cast<double>(budget) / static_cast<double>(s.c_min));
  return coeff * mass * log_term + mass * (std::numbers::pi * std::numbers::pi / 3.0 + 1.0) + 1.0;
}

}  // namespace bb

#endif  // BB_BOUND_HPP
