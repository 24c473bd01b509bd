#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairmab/rng.hpp"

namespace fairmab {

// Disjoint partition of arms {0..n-1} into ordered groups. Arm indices are
// global; group-local positions are derived from the order within a group.
struct GroupPartition {
  std::vector<std::vector<int>> groups;

  GroupPartition() = default;
  explicit GroupPartition(std::vector<std::vector<int>> g);
  GroupPartition(std::initializer_list<std::vector<int>> g)
      : GroupPartition(std::vector<std::vector<int>>(g)) {}

  // Groups of the given sizes over consecutive arm indices.
  static GroupPartition contiguous(const std::vector<int>& sizes);

  int num_groups() const { return static_cast<int>(groups.size()); }
  int group_size(int g) const { return static_cast<int>(groups[g].size()); }
  int num_arms() const { return num_arms_; }
  int max_group_size() const { return max_size_; }

  // Group of a global arm index; -1 when the arm is not covered.
  // Meaningful only for instances that pass validate_instance.
  int group_of(int arm) const { return arm_group_[arm]; }

 private:
  std::vector<int> arm_group_;
  int num_arms_ = 0;
  int max_size_ = 0;
};

struct RewardKind {
  enum class Type { bernoulli, uniform_band };
  Type type = Type::bernoulli;
  double halfwidth = 0.0;  // uniform_band only

  static RewardKind bernoulli() { return {Type::bernoulli, 0.0}; }
  static RewardKind uniform_band(double h) { return {Type::uniform_band, h}; }
};

struct BanditInstance {
  std::vector<double> means;  // mu_i in [0, 1]
  GroupPartition partition;
  RewardKind reward = RewardKind::bernoulli();
  std::uint64_t generator_seed = 0;  // provenance when generated; 0 otherwise

  int num_arms() const { return static_cast<int>(means.size()); }
};

struct ValidationReport {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

// Checks partition disjointness/coverage, non-empty groups, mean ranges and
// uniform_band support containment. Report-returning, never throws.
ValidationReport validate_instance(const BanditInstance& instance);

// One reward draw for the given arm, consuming one value from the stream.
// bernoulli: {0,1} with mean mu; uniform_band: uniform on [mu-h, mu+h].
double sample_reward(const BanditInstance& instance, int arm, RngStream& rng);

// Reward source used by simulation loops. The j-th draw of arm a is the pure
// function u01_at(a, j) of the stream key, so two runs configured with the
// same stream see identical draws per (arm, pull ordinal) regardless of the
// order in which arms are visited.
class RewardSampler {
 public:
  RewardSampler(const BanditInstance& instance, RngStream stream)
      : instance_(&instance),
        stream_(stream),
        draws_(instance.means.size(), 0) {}

  double sample(int arm);

 private:
  const BanditInstance* instance_;
  RngStream stream_;
  std::vector<std::uint64_t> draws_;
};

// Per-group generation recipe: sizes[g] arms with means uniform in ranges[g].
struct GeneratorSpec {
  std::vector<int> sizes;
  std::vector<std::pair<double, double>> ranges;  // each within [0, 1]
  RewardKind reward = RewardKind::bernoulli();
};

// Draws means group by group, arm by arm, one uniform per arm. The result
// always passes validate_instance; throws std::invalid_argument on a bad spec.
BanditInstance generate_instance(const GeneratorSpec& spec, RngStream& rng);

// Self-describing structured-text (JSON) form: means, groups, reward kind,
// generator seed.
std::string dump_instance(const BanditInstance& instance);
BanditInstance load_instance(const std::string& text);

}  // namespace fairmab
