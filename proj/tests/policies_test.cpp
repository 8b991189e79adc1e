#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "bb/bound.hpp"
#include "bb/policies.hpp"
#include "bb/trial.hpp"
#include "test_support.hpp"

namespace bb {
namespace {

using testing::make_state;

TEST(UcbDensityIndex, SpotValue) {
  // (0.5 + sqrt(2 ln 8 / 2)) / 2, evaluated independently.
  EXPECT_NEAR(ucb_density_index(0.5, 2, 8, 2), 0.9710134433004415, 1e-12);
}

TEST(UcbDensityIndex, NoBonusAtFirstStep) {
  EXPECT_DOUBLE_EQ(ucb_density_index(0.37, 1, 1, 4), 0.37 / 4);
}

TEST(UcbDensityIndex, UnitCostIsUcb1) {
  EXPECT_DOUBLE_EQ(ucb_density_index(0.6, 5, 40, 1), 0.6 + std::sqrt(2.0 * std::log(40.0) / 5.0));
}

TEST(UcbDensityIndex, RejectsUnpulledArm) {
  EXPECT_THROW(ucb_density_index(0.5, 0, 8, 2), std::invalid_argument);
}

TEST(UcbDensityIndex, BonusGrowsWithTimeAndShrinksWithPulls) {
  for (std::int64_t n = 1; n < 30; ++n) {
    for (std::int64_t t = std::max<std::int64_t>(n, 2); t < 200; t += 7) {
      ASSERT_LT(ucb_density_index(0.4, n, t, 3), ucb_density_index(0.4, n, t + 1, 3));
      if (n + 1 <= t) {
        ASSERT_GT(ucb_density_index(0.4, n, t, 3), ucb_density_index(0.4, n + 1, t, 3));
      }
    }
  }
}

// UCB values mean + bonus; with n = (100, 100) and t = 200 the bonus is
// sqrt(2 ln 200 / 100), so these means give UCB values (0.9, 0.5).
PolicyState two_arm_state(std::vector<std::int64_t> costs, std::int64_t residual) {
  const double bonus = std::sqrt(2.0 * std::log(200.0) / 100.0);
  return make_state(std::move(costs), {0.9 - bonus, 0.5 - bonus}, {100, 100}, residual);
}

TEST(KubeActionDistribution, MultiplicityWeights) {
  const auto s = two_arm_state({3, 2}, 8);
  EXPECT_NEAR(ucb_value(s, 0), 0.9, 1e-12);
  const auto d = kube_action_distribution(s);
  ASSERT_TRUE(d);
  EXPECT_DOUBLE_EQ(d->probs[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(d->probs[1], 1.0 / 3.0);
}

TEST(KubeActionDistribution, EqualCostsGivePointMass) {
  const auto s = make_state({4, 4, 4}, {0.2, 0.7, 0.5}, {3, 5, 2}, 37);
  const auto d = kube_action_distribution(s);
  ASSERT_TRUE(d);
  // Arm 2 has the highest UCB value thanks to its small pull count.
  ArmIndex best = 0;
  for (ArmIndex i = 1; i < 3; ++i)
    if (ucb_value(s, i) > ucb_value(s, best)) best = i;
  for (ArmIndex i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(d->probs[i], i == best ? 1.0 : 0.0);
}

TEST(KubeActionDistribution, InfeasibleBelowCheapestCost) {
  const auto s = make_state({2, 3}, {0.5, 0.5}, {1, 1}, 1);
  EXPECT_FALSE(kube_action_distribution(s));
  Rng rng(1);
  EXPECT_FALSE(kube_select(s, rng));
}

TEST(KubeActionDistribution, ValidOnRandomStates) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> cost(1, 15);
  std::uniform_int_distribution<std::int64_t> pulls(1, 50);
  std::uniform_real_distribution<double> mean(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> residual(0, 120);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::int64_t> c(6), n(6);
    std::vector<double> m(6);
    for (int j = 0; j < 6; ++j) {
      c[j] = cost(rng);
      n[j] = pulls(rng);
      m[j] = mean(rng);
    }
    const auto s = make_state(c, m, n, residual(rng));
    const auto d = kube_action_distribution(s);
    if (!s.feasible()) {
      ASSERT_FALSE(d);
      continue;
    }
    ASSERT_TRUE(d);
    const double total = std::accumulate(d->probs.begin(), d->probs.end(), 0.0);
    ASSERT_NEAR(total, 1.0, 1e-12);
    for (ArmIndex j = 0; j < 6; ++j) {
      if (!s.affordable(j)) {
        ASSERT_EQ(d->probs[j], 0.0);
      }
    }
  }
}

TEST(KubeActionDistribution, IgnoresArmsNeverPulled) {
  auto s = make_state({1, 1}, {0.3, 0.0}, {4, 0}, 10);
  const auto d = kube_action_distribution(s);
  ASSERT_TRUE(d);
  EXPECT_DOUBLE_EQ(d->probs[0], 1.0);
  EXPECT_EQ(fractional_kube_select(s), ArmIndex{0});
}

TEST(KubeSelect, PointMassAlwaysPicksThatArm) {
  const auto s = make_state({4, 4}, {0.2, 0.9}, {10, 10}, 40);
  Rng rng(8);
  for (int i = 0; i < 200; ++i) ASSERT_EQ(kube_select(s, rng), ArmIndex{1});
}

TEST(KubeSelect, EmpiricalFrequenciesFollowMultiplicities) {
  const auto s = two_arm_state({3, 2}, 8);
  Rng rng(31);
  int zero = 0;
  constexpr int n = 30000;
  for (int i = 0; i < n; ++i) zero += *kube_select(s, rng) == 0 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(zero) / n, 2.0 / 3.0, 0.02);
}

TEST(KubeSelect, FixedSeedFixedSequence) {
  const auto s = two_arm_state({3, 2}, 8);
  Rng a(12), b(12);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(kube_select(s, a), kube_select(s, b));
}

TEST(FractionalKubeSelect, PicksHighestDensityIndex) {
  // Indices (0.97102, 0.5): arm 0 is the argmax.
  auto s = make_state({2, 1}, {0.5, 0.5}, {2, 6}, 20);
  s.t = 8;
  EXPECT_NEAR(ucb_density_index(s.mean_est[0], s.n[0], s.t, s.costs[0]), 0.97101, 1e-5);
  s.mean_est[1] = 0.5 - std::sqrt(2.0 * std::log(8.0) / 6.0);
  EXPECT_NEAR(ucb_density_index(s.mean_est[1], s.n[1], s.t, s.costs[1]), 0.5, 1e-12);
  EXPECT_EQ(fractional_kube_select(s), ArmIndex{0});
}

TEST(FractionalKubeSelect, SkipsUnaffordableBestArm) {
  // Arm 2 has the best density but costs more than the residual; among the
  // affordable arms 0 and 1, arm 1 ranks higher.
  const auto s = make_state({1, 2, 3}, {0.05, 0.9, 0.99}, {40, 40, 1}, 2);
  std::vector<double> idx(3);
  for (ArmIndex i = 0; i < 3; ++i) idx[i] = ucb_density_index(s.mean_est[i], s.n[i], s.t, s.costs[i]);
  ASSERT_GT(idx[2], idx[1]);
  ASSERT_GT(idx[1], idx[0]);
  EXPECT_EQ(fractional_kube_select(s), ArmIndex{1});
}

TEST(FractionalKubeSelect, EqualCostsAgreeWithKube) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> cost(1, 9);
  std::uniform_int_distribution<std::int64_t> pulls(1, 40);
  std::uniform_real_distribution<double> mean(0.0, 1.0);
  std::uniform_int_distribution<int> arms(2, 8);
  for (int i = 0; i < 1000; ++i) {
    const int k = arms(rng);
    const std::int64_t c = cost(rng);
    std::vector<std::int64_t> n(k);
    std::vector<double> m(k);
    for (int j = 0; j < k; ++j) {
      n[j] = pulls(rng);
      m[j] = mean(rng);
    }
    const auto s = make_state(std::vector<std::int64_t>(k, c), m, n, c + static_cast<std::int64_t>(rng() % 100));
    const auto d = kube_action_distribution(s);
    const auto f = fractional_kube_select(s);
    ASSERT_TRUE(d && f);
    for (int j = 0; j < k; ++j) ASSERT_DOUBLE_EQ(d->probs[j], static_cast<ArmIndex>(j) == *f ? 1.0 : 0.0);
  }
}

TEST(PolicyState, MeanEstimateIsArithmeticMean) {
  PolicyState s({1, 2, 3}, 1000);
  std::mt19937_64 rng(4);
  std::vector<std::vector<int>> eighths(3);
  for (int i = 0; i < 200; ++i) {
    const ArmIndex a = rng() % 3;
    const int k = static_cast<int>(rng() % 9);  // reward k/8 is exact in binary
    eighths[a].push_back(k);
    s.record(a, k / 8.0);
  }
  for (ArmIndex a = 0; a < 3; ++a) {
    if (eighths[a].empty()) continue;
    const int num = std::accumulate(eighths[a].begin(), eighths[a].end(), 0);
    ASSERT_EQ(s.n[a], static_cast<std::int64_t>(eighths[a].size()));
    ASSERT_DOUBLE_EQ(s.mean_est[a], static_cast<double>(num) / (8.0 * static_cast<double>(eighths[a].size())));
  }
  EXPECT_EQ(s.t, 200);
  EXPECT_EQ(s.residual, 1000 - (s.n[0] + 2 * s.n[1] + 3 * s.n[2]));
}

TEST(NextAction, InitialSweepPullsEachArmInOrder) {
  PolicyState s({2, 3, 4}, 1000);
  Rng rng(1);
  for (auto id : {"kube", "fkube"}) {
    auto policy = make_policy(id);
    PolicyState st = s;
    for (ArmIndex expect = 0; expect < 3; ++expect) {
      const auto a = next_action(policy, st, rng);
      ASSERT_EQ(a, expect) << id;
      st.record(*a, 0.5);
    }
  }
}

TEST(NextAction, StopsBelowCheapestCost) {
  auto policy = make_policy("kube");
  const auto s = make_state({3, 5}, {0.5, 0.5}, {1, 1}, 2);
  Rng rng(1);
  EXPECT_FALSE(next_action(policy, s, rng));
}

TEST(NextAction, SweepSkipsUnaffordableArms) {
  // Budget 5 with costs (1, 5): arm 0 first, then arm 1 no longer fits and is
  // never initialized; selection continues on arm 0 alone.
  const auto inst = testing::unit_instance({0.2, 0.9}, {1, 5}, 5);
  for (auto id : {"kube", "fkube"}) {
    const auto r = run_trial(make_policy(id), inst, 2);
    EXPECT_EQ(r.pulls, (std::vector<std::int64_t>{5, 0})) << id;
  }
}

TEST(EpsilonFirst, ExploresOncePerArmThenExploits) {
  PolicyState s(std::vector<std::int64_t>(10, 10), 1000);
  EpsilonFirst policy(0.1);
  Rng rng(1);
  for (ArmIndex i = 0; i < 10; ++i) {
    const auto a = next_action(policy, s, rng);
    ASSERT_EQ(a, i);
    s.record(*a, 0.1 * static_cast<double>(i));
  }
  ASSERT_TRUE(policy.exploring());
  const auto a = next_action(policy, s, rng);
  EXPECT_FALSE(policy.exploring());
  EXPECT_EQ(a, ArmIndex{9});  // highest estimate, equal costs
}

TEST(EpsilonFirst, SmallAllowanceCoversOnlyAPrefix) {
  // epsilon * B = 25 with costs 10: floor(25 / 10) = 2 arms are explored.
  PolicyState s(std::vector<std::int64_t>(10, 10), 1000);
  EpsilonFirst policy(0.025);
  Rng rng(1);
  std::vector<ArmIndex> explored;
  while (true) {
    const auto a = next_action(policy, s, rng);
    if (!policy.exploring()) break;
    explored.push_back(*a);
    s.record(*a, 0.5);
  }
  EXPECT_EQ(explored, (std::vector<ArmIndex>{0, 1}));
}

TEST(EpsilonFirst, ExploitationFollowsGreedyPlanOnEstimates) {
  const std::vector<std::int64_t> costs{3, 2, 5};
  const std::vector<double> means{0.5, 0.25, 0.125};  // exact in binary
  PolicyState s(costs, 200);
  EpsilonFirst policy(0.1);
  Rng rng(1);
  std::vector<std::int64_t> exploit(3, 0);
  std::optional<UnboundedKnapsackProblem> plan_problem;
  while (auto a = next_action(policy, s, rng)) {
    if (!policy.exploring()) {
      if (!plan_problem) plan_problem = UnboundedKnapsackProblem{s.mean_est, s.costs, s.residual};
      ++exploit[*a];
    }
    s.record(*a, means[*a]);  // estimates equal the true means
  }
  ASSERT_TRUE(plan_problem);
  EXPECT_EQ(plan_problem->values, means);
  EXPECT_EQ(exploit, solve_density_greedy(*plan_problem).counts);
  EXPECT_LT(s.residual, 2);
}

TEST(MakePolicy, ParsesIdentifiers) {
  EXPECT_TRUE(std::holds_alternative<Kube>(make_policy("kube")));
  EXPECT_TRUE(std::holds_alternative<FractionalKube>(make_policy("fkube")));
  const auto e = make_policy("efirst:0.05");
  ASSERT_TRUE(std::holds_alternative<EpsilonFirst>(e));
  EXPECT_DOUBLE_EQ(std::get<EpsilonFirst>(e).epsilon(), 0.05);
  EXPECT_THROW(make_policy("ucb"), std::invalid_argument);
  EXPECT_THROW(make_policy("efirst:"), std::invalid_argument);
  EXPECT_THROW(make_policy("efirst:0.1x"), std::invalid_argument);
  EXPECT_THROW(make_policy("efirst:1.5"), std::invalid_argument);
  EXPECT_THROW(make_policy("efirst:0"), std::invalid_argument);
}

// --- theorem_bound ----------------------------------------------------------

TEST(TheoremBound, TwoArmExamples) {
  const auto st = instance_stats(testing::unit_instance({0.8, 0.4}, {1, 1}, 100));
  const double tail = 0.4 * (std::numbers::pi * std::numbers::pi / 3.0 + 1.0) + 1.0;
  EXPECT_NEAR(theorem_bound(st, 100, BoundVariant::kube), 51.0 * 0.4 * std::log(100.0) + tail, 1e-9);
  EXPECT_NEAR(theorem_bound(st, 100, BoundVariant::kube), 96.66141904763566, 1e-9);
  EXPECT_NEAR(theorem_bound(st, 100, BoundVariant::fractional), 94.81935097324042, 1e-9);
}

TEST(TheoremBound, CostDifferencesEnterScaledByBestCost) {
  // Best arm 1 (density 0.6); arm 0 has a negative gap and delta 2, so S = 2 / 1.
  const auto st = instance_stats(testing::unit_instance({0.9, 0.6}, {3, 1}, 100));
  EXPECT_DOUBLE_EQ(suboptimality_mass(st), 2.0);
}

TEST(TheoremBound, RejectsTiedBestArm) {
  const auto st = instance_stats(testing::unit_instance({0.5, 0.5}, {2, 2}, 100));
  EXPECT_THROW(theorem_bound(st, 100, BoundVariant::kube), std::domain_error);
}

TEST(TheoremBound, FractionalNeverExceedsKube) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> mean(0.05, 1.0);
  std::uniform_int_distribution<std::int64_t> cost(1, 20);
  for (int i = 0; i < 500; ++i) {
    const auto st = instance_stats(testing::unit_instance({mean(rng), mean(rng), mean(rng)},
                                                          {cost(rng), cost(rng), cost(rng)}, 1));
    if (!(st.d_min > 0.0)) continue;
    for (std::int64_t b : {100, 10'000, 1'000'000})
      ASSERT_LE(theorem_bound(st, b, BoundVariant::fractional), theorem_bound(st, b, BoundVariant::kube));
  }
}

}  // namespace
}  // namespace bb
