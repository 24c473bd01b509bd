#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fairmab/confreg.hpp"
#include "fairmab/env.hpp"
#include "fairmab/fairness.hpp"
#include "fairmab/merit.hpp"
#include "fairmab/rng.hpp"

namespace fairmab {

enum class Algorithm { bf_ucb, ucb1, mf_ucb, gef_ucb };

std::string_view to_string(Algorithm algo);
std::optional<Algorithm> parse_algorithm(std::string_view name);
// Stable non-zero id, part of the random-stream derivation.
std::uint64_t algorithm_id(Algorithm algo);

enum class Phase { init, main };

struct StepDecision;

// Sufficient statistic shared by all policies: round counter, per-arm pull
// counts and reward sums, per-group pull counts, and the warm-up phase
// marker. The warm-up runs for t_init = m * max_group_size rounds.
struct LearnerState {
  std::int64_t t = 0;
  std::vector<std::int64_t> arm_pulls;
  std::vector<double> reward_sums;
  std::vector<std::int64_t> group_pulls;
  Phase phase = Phase::init;
  std::int64_t t_init = 0;

  explicit LearnerState(const GroupPartition& partition);

  // Applies one observed pull. The phase flips init -> main exactly when
  // t reaches t_init.
  void update(const StepDecision& decision, double reward);
};

// One round's choice. `policy` is the within-group distribution actually
// played, over the chosen group's arms in group-local order (a point mass
// for deterministic baselines); it stays valid until the policy object's
// next select call.
struct StepDecision {
  int group = -1;
  int arm = -1;  // global arm index
  std::span<const double> policy;
  bool ufg_triggered = false;
};

struct PolicyContext {
  GroupPartition partition;  // policies never see true means
  MeritSpec merit;
  FairnessConfig beta;
  double delta = 0.01;
  OptimizerConfig optimizer;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Algorithm algorithm() const = 0;
  virtual StepDecision select(const LearnerState& state, RngStream& rng) = 0;
};

std::unique_ptr<Policy> make_policy(Algorithm algo, const PolicyContext& ctx);

// Shared machinery behind the four policies: the warm-up schedule, the
// exposure step (confidence region -> optimistic estimate -> sampled arm),
// the optimistic group comparison, and the exposure-floor group stage.
// Owns all per-step scratch, so one engine serves one single-threaded run.
class ExposureEngine {
 public:
  explicit ExposureEngine(PolicyContext ctx);

  const PolicyContext& context() const { return ctx_; }

  // Warm-up round: groups visited round-robin; the first unpulled arm of the
  // visited group, else that group's exposure policy.
  StepDecision init_select(const LearnerState& state, RngStream& rng);

  // Builds group g's region at N_g = state.group_pulls[g], maximizes the
  // merit-weighted value over it, and samples the arm by inverse CDF over
  // group-local index order.
  StepDecision exposure_select(const LearnerState& state, int g,
                               RngStream& rng);

  // Group with the largest optimistic merit-weighted value; ties to the
  // lowest index.
  int learn_select(const LearnerState& state);

  // Exposure-floor group stage: the most-starved group whose floor would be
  // violated next round if any (flag true), otherwise learn_select.
  std::pair<int, bool> fair_group(const LearnerState& state);

  // Optimistic value of one group at the current statistics.
  double optimistic_group_value(const LearnerState& state, int g);

  // argmax of mu_hat_i + sqrt(2 ln t / N_i) over the given arms; ties to the
  // first listed arm.
  int ucb1_argmax(const LearnerState& state, std::span<const int> arms) const;

  std::span<const double> point_mass(int group_size, int local_index);

 private:
  void gather_group(const LearnerState& state, int g);

  PolicyContext ctx_;
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
  ConfidenceRegion region_;
  OptimisticEstimate estimate_;
  std::vector<double> value_scratch_;
  std::vector<double> point_buf_;
};

// Smallest local index j with cumulative policy mass above u.
int sample_from_policy(std::span<const double> policy, double u);

}  // namespace fairmab
