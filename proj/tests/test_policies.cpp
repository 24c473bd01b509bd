#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>

#include "fairmab/policies.hpp"
#include "test_util.hpp"

using namespace fairmab;

namespace {

PolicyContext make_context(GroupPartition partition,
                           std::vector<std::string> beta_text = {}) {
  PolicyContext ctx;
  ctx.partition = std::move(partition);
  ctx.merit = make_identity_merit(1e-3);
  if (beta_text.empty())
    beta_text.assign(static_cast<std::size_t>(ctx.partition.num_groups()),
                     "0.1");
  ctx.beta = FairnessConfig::parse(beta_text);
  ctx.delta = 0.01;
  return ctx;
}

// State with every arm pulled `pulls` times at empirical mean `mean`.
LearnerState warm_state(const GroupPartition& partition,
                        const std::vector<std::int64_t>& pulls,
                        const std::vector<double>& means) {
  LearnerState state(partition);
  for (int arm = 0; arm < partition.num_arms(); ++arm) {
    const auto n = pulls[static_cast<std::size_t>(arm)];
    state.arm_pulls[static_cast<std::size_t>(arm)] = n;
    state.reward_sums[static_cast<std::size_t>(arm)] =
        means[static_cast<std::size_t>(arm)] * static_cast<double>(n);
    state.t += n;
    state.group_pulls[static_cast<std::size_t>(partition.group_of(arm))] += n;
  }
  state.phase = Phase::main;
  return state;
}

}  // namespace

TEST_CASE("warm-up visits groups round robin and exhausted groups fall back to exposure") {
  // Sizes (2, 3): t_init = 6; the fifth pull hits group 0 after both its
  // arms are spent.
  auto ctx = make_context(GroupPartition::contiguous({2, 3}), {"0.4", "0.4"});
  auto policy = make_policy(Algorithm::bf_ucb, ctx);
  LearnerState state(ctx.partition);
  REQUIRE(state.t_init == 6);
  RngStream rng(1, 0, StreamPurpose::policy);

  std::vector<int> groups, arms;
  for (int t = 0; t < 6; ++t) {
    const auto d = policy->select(state, rng);
    groups.push_back(d.group);
    arms.push_back(d.arm);
    state.update(d, 1.0);
  }
  CHECK(groups == std::vector<int>{0, 1, 0, 1, 0, 1});
  CHECK(arms[0] == 0);
  CHECK(arms[1] == 2);
  CHECK(arms[2] == 1);
  CHECK(arms[3] == 3);
  CHECK((arms[4] == 0 || arms[4] == 1));  // exposure inside group 0
  CHECK(arms[5] == 4);
  CHECK(state.phase == Phase::main);
  for (auto n : state.arm_pulls) CHECK(n >= 1);
}

TEST_CASE("phase flips exactly at t_init") {
  auto ctx = make_context(GroupPartition::contiguous({2, 3}));
  auto policy = make_policy(Algorithm::ucb1, ctx);
  LearnerState state(ctx.partition);
  RngStream rng(2, 0, StreamPurpose::policy);
  for (int t = 0; t < 6; ++t) {
    CHECK(state.phase == Phase::init);
    const auto d = policy->select(state, rng);
    state.update(d, 0.0);
  }
  CHECK(state.phase == Phase::main);
}

TEST_CASE("the starved-group stage follows the exact slack rule") {
  auto ctx = make_context(GroupPartition::contiguous({1, 1}), {"2/5", "2/5"});
  ExposureEngine engine(ctx);

  // t = 10, pulls (3, 7): slacks (1, -3) -> group 0 forced.
  auto state = warm_state(ctx.partition, {3, 7}, {0.5, 0.5});
  REQUIRE(state.t == 10);
  auto [g, ufg] = engine.fair_group(state);
  CHECK(g == 0);
  CHECK(ufg);

  // pulls (4, 6): slacks (0, -2) -> no group is starved, learning picks.
  state = warm_state(ctx.partition, {4, 6}, {0.5, 0.5});
  std::tie(g, ufg) = engine.fair_group(state);
  CHECK_FALSE(ufg);
}

TEST_CASE("learn_select takes the optimistic argmax with lowest-index ties") {
  auto ctx = make_context(GroupPartition::contiguous({2, 2}));
  ExposureEngine engine(ctx);

  // Huge counts shrink the regions to points: group values 0.68 vs 0.60.
  const std::int64_t big = 1'000'000'000;
  auto state = warm_state(ctx.partition, {big, big, big, big},
                          {0.8, 0.2, 0.6, 0.6});
  CHECK(engine.learn_select(state) == 0);

  // Swapped: the better group wins regardless of order.
  state = warm_state(ctx.partition, {big, big, big, big},
                     {0.6, 0.6, 0.8, 0.2});
  CHECK(engine.learn_select(state) == 1);

  // Identical statistics tie to group 0.
  state = warm_state(ctx.partition, {big, big, big, big},
                     {0.7, 0.7, 0.7, 0.7});
  CHECK(engine.learn_select(state) == 0);
}

TEST_CASE("a group pulled far less gets an inflated optimistic value") {
  auto ctx = make_context(GroupPartition::contiguous({2, 2}));
  ExposureEngine engine(ctx);
  auto state = warm_state(ctx.partition, {50000, 50000, 50, 50},
                          {0.7, 0.7, 0.7, 0.7});
  const double tight = engine.optimistic_group_value(state, 0);
  const double loose = engine.optimistic_group_value(state, 1);
  CHECK(loose > tight);
  CHECK(loose >= 0.7);  // at least the point-estimate value
}

TEST_CASE("exposure at a near-point region plays the merit-proportional policy") {
  auto ctx = make_context(GroupPartition::contiguous({2}));
  ExposureEngine engine(ctx);
  const std::int64_t big = 1'000'000'000'000;
  auto state = warm_state(ctx.partition, {big, big}, {0.6, 0.4});
  RngStream rng(3, 0, StreamPurpose::policy);
  const auto d = engine.exposure_select(state, 0, rng);
  REQUIRE(d.policy.size() == 2);
  CHECK(d.policy[0] == doctest::Approx(0.6).epsilon(1e-4));
  CHECK(d.policy[1] == doctest::Approx(0.4).epsilon(1e-4));
}

TEST_CASE("singleton group exposure always plays its arm") {
  auto ctx = make_context(GroupPartition::contiguous({1, 2}));
  ExposureEngine engine(ctx);
  auto state = warm_state(ctx.partition, {5, 5, 5}, {0.5, 0.5, 0.5});
  RngStream rng(4, 0, StreamPurpose::policy);
  const auto d = engine.exposure_select(state, 0, rng);
  CHECK(d.arm == 0);
  REQUIRE(d.policy.size() == 1);
  CHECK(d.policy[0] == 1.0);
}

TEST_CASE("symmetric exposure frequencies match the uniform policy") {
  auto ctx = make_context(GroupPartition::contiguous({3}));
  ExposureEngine engine(ctx);
  auto state = warm_state(ctx.partition, {1000, 1000, 1000}, {0.6, 0.6, 0.6});
  RngStream rng(5, 0, StreamPurpose::policy);
  const int draws = 100000;
  std::vector<int> hits(3, 0);
  for (int i = 0; i < draws; ++i)
    ++hits[static_cast<std::size_t>(engine.exposure_select(state, 0, rng).arm)];
  const double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / draws);
  for (int a = 0; a < 3; ++a)
    CHECK(std::abs(hits[static_cast<std::size_t>(a)] / double(draws) - 1.0 / 3) <=
          3 * sigma);
}

TEST_CASE("ucb1 prefers the larger bonus and breaks ties low") {
  auto ctx = make_context(GroupPartition::contiguous({2}));
  ExposureEngine engine(ctx);
  const std::vector<int> arms = {0, 1};

  // Equal means, pulls (1, 2): the less-pulled arm wins.
  auto state = warm_state(ctx.partition, {1, 2}, {0.5, 0.5});
  CHECK(engine.ucb1_argmax(state, arms) == 0);

  // Clear winner dominates the bonus at large counts.
  state = warm_state(ctx.partition, {100000, 100000}, {1.0, 0.0});
  CHECK(engine.ucb1_argmax(state, arms) == 0);
  state = warm_state(ctx.partition, {100000, 100000}, {0.0, 1.0});
  CHECK(engine.ucb1_argmax(state, arms) == 1);

  // Fully symmetric statistics tie to the lowest index.
  state = warm_state(ctx.partition, {7, 7}, {0.4, 0.4});
  CHECK(engine.ucb1_argmax(state, arms) == 0);
}

TEST_CASE("mf plays merit shares at a point region and reports the true group") {
  auto ctx = make_context(GroupPartition::contiguous({1, 1}), {"0.1", "0.1"});
  auto policy = make_policy(Algorithm::mf_ucb, ctx);
  const std::int64_t big = 1'000'000'000'000;
  auto state = warm_state(ctx.partition, {big, big}, {0.6, 0.4});
  RngStream rng(6, 0, StreamPurpose::policy);
  std::map<int, int> group_hits;
  for (int i = 0; i < 50000; ++i) {
    const auto d = policy->select(state, rng);
    CHECK(ctx.partition.group_of(d.arm) == d.group);
    REQUIRE(d.policy.size() == 1);  // conditional over a singleton group
    CHECK(d.policy[0] == 1.0);
    ++group_hits[d.group];
  }
  CHECK(group_hits[0] / 50000.0 == doctest::Approx(0.6).epsilon(0.02));
  CHECK(group_hits[1] / 50000.0 == doctest::Approx(0.4).epsilon(0.03));
}

TEST_CASE("mf conditional policy is uniform for identical arms") {
  auto ctx = make_context(GroupPartition::contiguous({2, 2}), {"0.1", "0.1"});
  auto policy = make_policy(Algorithm::mf_ucb, ctx);
  auto state = warm_state(ctx.partition, {500, 500, 500, 500},
                          {0.7, 0.7, 0.7, 0.7});
  RngStream rng(7, 0, StreamPurpose::policy);
  const auto d = policy->select(state, rng);
  REQUIRE(d.policy.size() == 2);
  CHECK(d.policy[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.policy[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gef pulls the best ucb arm of the forced group") {
  auto ctx = make_context(GroupPartition::contiguous({2, 2}), {"2/5", "2/5"});
  auto policy = make_policy(Algorithm::gef_ucb, ctx);
  // t = 10 with group 1 starved: slack (0.4*10 - 5, 0.4*10 - 5)...
  // make group 1 clearly starved: pulls (4, 4, 1, 1).
  auto state = warm_state(ctx.partition, {4, 4, 1, 1}, {0.2, 0.3, 0.9, 0.1});
  RngStream rng(8, 0, StreamPurpose::policy);
  const auto d = policy->select(state, rng);
  CHECK(d.group == 1);
  CHECK(d.ufg_triggered);
  CHECK(d.arm == 2);  // higher empirical mean, equal pulls
  REQUIRE(d.policy.size() == 2);
  CHECK(d.policy[0] == 1.0);

  // Identical arms within the group: lowest index.
  state = warm_state(ctx.partition, {4, 4, 1, 1}, {0.2, 0.3, 0.5, 0.5});
  const auto tie = policy->select(state, rng);
  CHECK(tie.arm == 2);
}

TEST_CASE("update accumulates counts and keeps totals consistent") {
  auto ctx = make_context(GroupPartition::contiguous({2, 3}), {"0.2", "0.2"});
  auto policy = make_policy(Algorithm::bf_ucb, ctx);
  LearnerState state(ctx.partition);
  RngStream rng(9, 0, StreamPurpose::policy);
  RngStream rewards(10, 0, StreamPurpose::reward);

  const auto first = policy->select(state, rng);
  state.update(first, 1.0);
  CHECK(state.t == 1);
  CHECK(state.arm_pulls[0] == 1);
  CHECK(state.reward_sums[0] == 1.0);

  for (int t = 1; t < 10000; ++t) {
    const auto d = policy->select(state, rng);
    state.update(d, rewards.next_u01() < 0.5 ? 1.0 : 0.0);
  }
  std::int64_t arm_total = 0, group_total = 0;
  for (auto n : state.arm_pulls) arm_total += n;
  for (auto n : state.group_pulls) group_total += n;
  CHECK(arm_total == state.t);
  CHECK(group_total == state.t);
  CHECK(state.t == 10000);
  // Per-group pulls equal the sum over member arms.
  for (int g = 0; g < ctx.partition.num_groups(); ++g) {
    std::int64_t total = 0;
    for (int arm : ctx.partition.groups[static_cast<std::size_t>(g)])
      total += state.arm_pulls[static_cast<std::size_t>(arm)];
    CHECK(total == state.group_pulls[static_cast<std::size_t>(g)]);
  }
}

TEST_CASE("per-step policies are valid distributions with the merit floor") {
  auto ctx = make_context(GroupPartition::contiguous({2, 3}), {"0.3", "0.3"});
  const auto bounds = merit_bounds(ctx.merit);
  for (const auto algo : {Algorithm::bf_ucb, Algorithm::mf_ucb}) {
    auto policy = make_policy(algo, ctx);
    LearnerState state(ctx.partition);
    RngStream rng(11, 0, StreamPurpose::policy);
    RngStream rewards(12, 0, StreamPurpose::reward);
    for (int t = 0; t < 3000; ++t) {
      const auto d = policy->select(state, rng);
      double total = 0.0;
      for (double p : d.policy) total += p;
      CHECK(std::abs(total - 1.0) <= 1e-12);
      if (state.phase == Phase::main) {
        const auto k = static_cast<double>(d.policy.size());
        for (double p : d.policy)
          CHECK(p >= bounds.gamma1 / (k * bounds.gamma2) - 1e-15);
      }
      const auto& arms =
          ctx.partition.groups[static_cast<std::size_t>(d.group)];
      std::size_t local = arms.size();
      for (std::size_t j = 0; j < arms.size(); ++j)
        if (arms[j] == d.arm) local = j;
      REQUIRE(local < arms.size());
      CHECK(d.policy[local] > 0.0);
      state.update(d, rewards.next_u01() < 0.6 ? 1.0 : 0.0);
    }
  }
}

TEST_CASE("identical seeds give identical pull sequences") {
  auto ctx = make_context(GroupPartition::contiguous({2, 3}), {"0.3", "0.3"});
  for (const auto algo : {Algorithm::bf_ucb, Algorithm::ucb1, Algorithm::mf_ucb,
                          Algorithm::gef_ucb}) {
    std::vector<int> first_arms, second_arms;
    for (int rep = 0; rep < 2; ++rep) {
      auto policy = make_policy(algo, ctx);
      LearnerState state(ctx.partition);
      RngStream rng(99, 0, StreamPurpose::policy, algorithm_id(algo));
      RngStream rewards(99, 0, StreamPurpose::reward, algorithm_id(algo));
      auto& arms = rep == 0 ? first_arms : second_arms;
      for (int t = 0; t < 2000; ++t) {
        const auto d = policy->select(state, rng);
        arms.push_back(d.arm);
        state.update(d, rewards.next_u01() < 0.55 ? 1.0 : 0.0);
      }
    }
    CHECK(first_arms == second_arms);
  }
}

TEST_CASE("inverse-CDF sampling picks the first bucket past u") {
  const std::vector<double> pi = {0.2, 0.5, 0.3};
  CHECK(sample_from_policy(pi, 0.0) == 0);
  CHECK(sample_from_policy(pi, 0.19) == 0);
  CHECK(sample_from_policy(pi, 0.2) == 1);
  CHECK(sample_from_policy(pi, 0.69) == 1);
  CHECK(sample_from_policy(pi, 0.7) == 2);
  CHECK(sample_from_policy(pi, 0.999999) == 2);
}
