#include "fairmab/env.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fairmab {

GroupPartition::GroupPartition(std::vector<std::vector<int>> g)
    : groups(std::move(g)) {
  int max_index = -1;
  for (const auto& grp : groups) {
    max_size_ = std::max(max_size_, static_cast<int>(grp.size()));
    for (int arm : grp) max_index = std::max(max_index, arm);
  }
  num_arms_ = max_index + 1;
  // Last writer wins on overlap; validate_instance reports such instances.
  arm_group_.assign(num_arms_, -1);
  for (int gi = 0; gi < num_groups(); ++gi)
    for (int arm : groups[gi])
      if (arm >= 0) arm_group_[arm] = gi;
}

GroupPartition GroupPartition::contiguous(const std::vector<int>& sizes) {
  std::vector<std::vector<int>> groups;
  groups.reserve(sizes.size());
  int next = 0;
  for (int k : sizes) {
    std::vector<int> g(static_cast<std::size_t>(std::max(k, 0)));
    for (int& a : g) a = next++;
    groups.push_back(std::move(g));
  }
  return GroupPartition(std::move(groups));
}

ValidationReport validate_instance(const BanditInstance& instance) {
  ValidationReport report;
  const auto& part = instance.partition;
  const int n = instance.num_arms();

  if (part.num_groups() == 0) report.errors.push_back("no groups defined");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int g = 0; g < part.num_groups(); ++g) {
    if (part.groups[g].empty())
      report.errors.push_back("group " + std::to_string(g) + " is empty");
    for (int arm : part.groups[g]) {
      if (arm < 0 || arm >= n) {
        report.errors.push_back("arm " + std::to_string(arm) +
                                " out of range in group " + std::to_string(g));
        continue;
      }
      if (++seen[static_cast<std::size_t>(arm)] == 2)
        report.errors.push_back("arm " + std::to_string(arm) +
                                " in two groups");
    }
  }
  for (int a = 0; a < n; ++a)
    if (seen[static_cast<std::size_t>(a)] == 0)
      report.errors.push_back("arm " + std::to_string(a) +
                              " not covered by any group");

  for (int a = 0; a < n; ++a) {
    const double mu = instance.means[static_cast<std::size_t>(a)];
    if (!(mu >= 0.0 && mu <= 1.0)) {
      report.errors.push_back("mean out of [0,1] for arm " + std::to_string(a));
      continue;
    }
    if (instance.reward.type == RewardKind::Type::uniform_band) {
      const double h = instance.reward.halfwidth;
      if (h < 0.0 || mu - h < 0.0 || mu + h > 1.0)
        report.errors.push_back("uniform band exceeds [0,1] for arm " +
                                std::to_string(a));
    }
  }
  return report;
}

namespace {

double reward_from_u01(const BanditInstance& instance, int arm, double u) {
  const double mu = instance.means[static_cast<std::size_t>(arm)];
  switch (instance.reward.type) {
    case RewardKind::Type::bernoulli:
      return u < mu ? 1.0 : 0.0;
    case RewardKind::Type::uniform_band:
      return mu + instance.reward.halfwidth * (2.0 * u - 1.0);
  }
  return 0.0;
}

}  // namespace

double sample_reward(const BanditInstance& instance, int arm, RngStream& rng) {
  if (arm < 0 || arm >= instance.num_arms())
    throw std::invalid_argument("sample_reward: invalid arm index");
  return reward_from_u01(instance, arm, rng.next_u01());
}

double RewardSampler::sample(int arm) {
  if (arm < 0 || arm >= instance_->num_arms())
    throw std::invalid_argument("RewardSampler: invalid arm index");
  const std::uint64_t ordinal = draws_[static_cast<std::size_t>(arm)]++;
  const double u =
      stream_.u01_at(static_cast<std::uint64_t>(arm), ordinal);
  return reward_from_u01(*instance_, arm, u);
}

BanditInstance generate_instance(const GeneratorSpec& spec, RngStream& rng) {
  if (spec.sizes.empty() || spec.sizes.size() != spec.ranges.size())
    throw std::invalid_argument("generator spec: sizes/ranges mismatch");
  for (const auto& [lo, hi] : spec.ranges)
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
      throw std::invalid_argument("generator spec: range outside [0,1]");
  for (int k : spec.sizes)
    if (k <= 0) throw std::invalid_argument("generator spec: empty group");

  BanditInstance instance;
  instance.partition = GroupPartition::contiguous(spec.sizes);
  instance.reward = spec.reward;
  instance.generator_seed = rng.key();
  instance.means.reserve(
      static_cast<std::size_t>(instance.partition.num_arms()));
  for (std::size_t g = 0; g < spec.sizes.size(); ++g) {
    const auto [lo, hi] = spec.ranges[g];
    for (int j = 0; j < spec.sizes[g]; ++j)
      instance.means.push_back(lo + (hi - lo) * rng.next_u01());
  }
  return instance;
}

std::string dump_instance(const BanditInstance& instance) {
  nlohmann::json j;
  j["means"] = instance.means;
  j["groups"] = instance.partition.groups;
  if (instance.reward.type == RewardKind::Type::bernoulli) {
    j["reward_kind"] = "bernoulli";
  } else {
    j["reward_kind"] = "uniform_band";
    j["halfwidth"] = instance.reward.halfwidth;
  }
  j["generator_seed"] = instance.generator_seed;
  return j.dump(2);
}

BanditInstance load_instance(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  BanditInstance instance;
  instance.means = j.at("means").get<std::vector<double>>();
  instance.partition =
      GroupPartition(j.at("groups").get<std::vector<std::vector<int>>>());
  const auto kind = j.at("reward_kind").get<std::string>();
  if (kind == "bernoulli") {
    instance.reward = RewardKind::bernoulli();
  } else if (kind == "uniform_band") {
    instance.reward = RewardKind::uniform_band(j.at("halfwidth").get<double>());
  } else {
    throw std::invalid_argument("unknown reward_kind: " + kind);
  }
  instance.generator_seed = j.value("generator_seed", std::uint64_t{0});
  return instance;
}

}  // namespace fairmab
