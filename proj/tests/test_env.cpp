#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <string>

#include "fairmab/env.hpp"
#include "test_util.hpp"

using namespace fairmab;

namespace {

BanditInstance two_arm_instance() {
  BanditInstance instance;
  instance.means = {0.6, 0.4};
  instance.partition = GroupPartition({{0}, {1}});
  return instance;
}

bool mentions(const ValidationReport& report, const std::string& needle) {
  for (const auto& e : report.errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("validate_instance accepts a well-formed instance") {
  CHECK(validate_instance(two_arm_instance()).ok());
}

TEST_CASE("validate_instance reports overlap, bad means, empty groups") {
  BanditInstance dup;
  dup.means = {0.5, 0.5};
  dup.partition = GroupPartition({{0}, {0}});
  const auto dup_report = validate_instance(dup);
  CHECK_FALSE(dup_report.ok());
  CHECK(mentions(dup_report, "arm 0 in two groups"));

  BanditInstance bad_mean;
  bad_mean.means = {1.2};
  bad_mean.partition = GroupPartition({{0}});
  CHECK(mentions(validate_instance(bad_mean), "mean out of [0,1]"));

  BanditInstance empty_group;
  empty_group.means = {0.5};
  empty_group.partition = GroupPartition({{0}, {}});
  CHECK(mentions(validate_instance(empty_group), "is empty"));

  BanditInstance band;
  band.means = {0.95};
  band.partition = GroupPartition({{0}});
  band.reward = RewardKind::uniform_band(0.1);
  CHECK(mentions(validate_instance(band), "uniform band"));
}

TEST_CASE("every arm of a generated instance sits in exactly one group") {
  RngStream rng(2024, 0, StreamPurpose::aux);
  for (int trial = 0; trial < 50; ++trial) {
    const auto instance = test::random_instance(rng, 4, 5);
    REQUIRE(validate_instance(instance).ok());
    std::vector<int> hits(static_cast<std::size_t>(instance.num_arms()), 0);
    for (const auto& group : instance.partition.groups)
      for (int arm : group) ++hits[static_cast<std::size_t>(arm)];
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("degenerate bernoulli arms give constant rewards") {
  BanditInstance instance;
  instance.means = {1.0, 0.0};
  instance.partition = GroupPartition({{0}, {1}});
  RngStream rng(7, 0, StreamPurpose::reward);
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_reward(instance, 0, rng) == 1.0);
    CHECK(sample_reward(instance, 1, rng) == 0.0);
  }
}

TEST_CASE("sample_reward rejects invalid arm indices") {
  auto instance = two_arm_instance();
  RngStream rng(7, 0, StreamPurpose::reward);
  CHECK_THROWS_AS(sample_reward(instance, 2, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_reward(instance, -1, rng), std::invalid_argument);
}

TEST_CASE("empirical bernoulli means land in the 4-sigma binomial band") {
  BanditInstance instance;
  instance.partition = GroupPartition({{0}});
  const int n = 1'000'000;
  for (int tenth = 1; tenth <= 9; ++tenth) {
    const double mu = tenth / 10.0;
    instance.means = {mu};
    RngStream rng(500 + tenth, 0, StreamPurpose::reward);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_reward(instance, 0, rng);
    const double band = 4.0 * std::sqrt(mu * (1.0 - mu) / n);
    CHECK(std::abs(sum / n - mu) <= band);
  }
}

TEST_CASE("uniform band rewards stay in the band with the right mean") {
  BanditInstance instance;
  instance.means = {0.4};
  instance.partition = GroupPartition({{0}});
  instance.reward = RewardKind::uniform_band(0.2);
  RngStream rng(11, 0, StreamPurpose::reward);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double r = sample_reward(instance, 0, rng);
    REQUIRE(r >= 0.2);
    REQUIRE(r <= 0.6);
    sum += r;
  }
  CHECK(sum / n == doctest::Approx(0.4).epsilon(0.005));
}

TEST_CASE("reward draws are bit-reproducible per stream") {
  auto instance = two_arm_instance();
  RngStream a(42, 3, StreamPurpose::reward, 1);
  RngStream b(42, 3, StreamPurpose::reward, 1);
  for (int i = 0; i < 500; ++i)
    CHECK(sample_reward(instance, i % 2, a) == sample_reward(instance, i % 2, b));
}

TEST_CASE("RewardSampler keys draws by (arm, pull ordinal)") {
  auto instance = two_arm_instance();
  const RngStream stream(42, 0, StreamPurpose::reward, 0);
  RewardSampler interleaved(instance, stream);
  RewardSampler blocked(instance, stream);

  // Different visit orders, same per-(arm, ordinal) values.
  std::vector<double> inter_arm0, inter_arm1;
  for (int i = 0; i < 10; ++i) {
    inter_arm0.push_back(interleaved.sample(0));
    inter_arm1.push_back(interleaved.sample(1));
  }
  for (int i = 0; i < 10; ++i) CHECK(blocked.sample(0) == inter_arm0[static_cast<std::size_t>(i)]);
  for (int i = 0; i < 10; ++i) CHECK(blocked.sample(1) == inter_arm1[static_cast<std::size_t>(i)]);
}

TEST_CASE("generate_instance draws means inside each group's range") {
  GeneratorSpec low;
  low.sizes = {5, 10};
  low.ranges = {{0.6, 0.85}, {0.6, 0.85}};
  RngStream rng(1, 0, StreamPurpose::instance);
  const auto instance = generate_instance(low, rng);
  REQUIRE(instance.num_arms() == 15);
  REQUIRE(validate_instance(instance).ok());
  for (double mu : instance.means) {
    CHECK(mu >= 0.6);
    CHECK(mu <= 0.85);
  }

  GeneratorSpec high;
  high.sizes = {10, 50};
  high.ranges = {{0.5, 0.8}, {0.7, 1.0}};
  const auto hi_instance = generate_instance(high, rng);
  REQUIRE(hi_instance.num_arms() == 60);
  for (int arm : hi_instance.partition.groups[0]) {
    CHECK(hi_instance.means[static_cast<std::size_t>(arm)] >= 0.5);
    CHECK(hi_instance.means[static_cast<std::size_t>(arm)] <= 0.8);
  }
  for (int arm : hi_instance.partition.groups[1]) {
    CHECK(hi_instance.means[static_cast<std::size_t>(arm)] >= 0.7);
    CHECK(hi_instance.means[static_cast<std::size_t>(arm)] <= 1.0);
  }
}

TEST_CASE("zero-width generator range pins the means") {
  GeneratorSpec spec;
  spec.sizes = {3};
  spec.ranges = {{0.6, 0.6}};
  RngStream rng(9, 0, StreamPurpose::instance);
  const auto instance = generate_instance(spec, rng);
  for (double mu : instance.means) CHECK(mu == 0.6);
}

TEST_CASE("generate_instance rejects bad ranges") {
  GeneratorSpec spec;
  spec.sizes = {2};
  spec.ranges = {{0.5, 1.2}};
  RngStream rng(9, 0, StreamPurpose::instance);
  CHECK_THROWS_AS(generate_instance(spec, rng), std::invalid_argument);
}

TEST_CASE("instance dump/load round trip") {
  RngStream rng(77, 0, StreamPurpose::aux);
  const auto instance = test::random_instance(rng);
  const auto loaded = load_instance(dump_instance(instance));
  CHECK(loaded.means == instance.means);
  CHECK(loaded.partition.groups == instance.partition.groups);
  CHECK(loaded.generator_seed == instance.generator_seed);
  CHECK(loaded.reward.type == instance.reward.type);
}
