// Single-trial execution loop.

#ifndef BB_TRIAL_HPP
#define BB_TRIAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "bb/bandit.hpp"
#include "bb/policies.hpp"
#include "bb/rng.hpp"

namespace bb {

struct NoObserver {
  void operator()(const PullOutcome&, const PolicyState&) const {}
};

/// Runs `policy` on `inst` until the residual budget drops below the cheapest
/// cost. The seed fixes the whole trial: rewards and policy randomization share
/// one stream. `on_pull` sees every outcome together with the state before the
/// pull is charged.
///
/// A policy that picks an arm the residual budget cannot pay for, or that stops
/// while the cheapest arm is still affordable, violates its contract; both are
/// reported as std::logic_error.
template <class Policy, class Observer = NoObserver>
TrialResult run_trial(Policy policy, const BanditInstance& inst, std::uint64_t seed,
                      Observer&& on_pull = {}) {
  Rng rng(seed);
  PolicyState state(inst.costs(), inst.budget);
  TrialResult result;
  result.pulls.assign(inst.size(), 0);

  while (auto arm = next_action(policy, state, rng)) {
    const ArmIndex i = *arm;
    if (i >= inst.size())
      throw std::logic_error("run_trial: policy chose arm " + std::to_string(i) +
                             " out of range");
    const ArmSpec& spec = inst.arms[i];
    if (spec.cost > state.residual)
      throw std::logic_error("run_trial: policy chose arm " + std::to_string(i) + " costing " +
                             std::to_string(spec.cost) + " with residual budget " +
                             std::to_string(state.residual));

    const double reward = sample_reward(spec, rng);
    on_pull(PullOutcome{i, reward, spec.cost, state.t + 1}, state);

    result.total_reward += reward;
    ++result.pulls[i];
    ++result.total_pulls;
    result.spent += spec.cost;
    state.record(i, reward / inst.reward_cap);
  }

  if (state.feasible())
    throw std::logic_error("run_trial: policy stopped with residual budget " +
                           std::to_string(state.residual) + " still covering the cheapest arm");

  for (ArmIndex i = 0; i < inst.size(); ++i)
    result.expected_reward += static_cast<double>(result.pulls[i]) * inst.arms[i].mean;
  return result;
}

}  // namespace bb

#endif  // BB_TRIAL_HPP
