#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fairmab/env.hpp"
#include "fairmab/fairness.hpp"
#include "fairmab/oracle.hpp"
#include "fairmab/policies.hpp"

namespace fairmab {

// Compensated summation; keeps the decomposition identity checkable at
// 1e-9 * T even over millions of accumulated terms.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

enum class Metric {
  pseudo_regret,
  realized_reward,
  term1,
  term2,
  fr_norm,
  gef_slack,
  group_pulls,
  arm_pulls,
};

std::string_view metric_name(Metric metric);
bool metric_is_integral(Metric metric);
bool metric_is_per_group(Metric metric);

// One time-series sample. entity is -1 for global metrics, the group index
// for per-group metrics, and the arm index for arm_pulls.
struct SnapshotRow {
  std::int64_t t = 0;
  Metric metric{};
  int entity = -1;
  double value = 0.0;
};

// Geometric checkpoint grid: t in {1..10}, then `per_decade` points per
// decade up to T, plus T itself and any extra checkpoints. Sorted, unique.
std::vector<std::int64_t> checkpoint_schedule(
    std::int64_t horizon, int per_decade,
    std::span<const std::int64_t> extras = {});

struct GroupFairnessReport {
  std::int64_t pulls = 0;
  std::int64_t min_gef_slack = 0;
  double normalized_fr = 0.0;
  bool fr_defined = false;
};

struct FinalMetrics {
  double pseudo_regret = 0.0;
  double realized_reward = 0.0;
  double expected_reward = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double residual = 0.0;      // pseudo_regret - term1 - term2 at the horizon
  double residual_max = 0.0;  // max |residual| over all checkpoints
  std::vector<GroupFairnessReport> groups;
  std::vector<std::int64_t> arm_pulls;
};

// Online accumulators for one run: realized and policy-expected reward, the
// two regret decomposition terms, per-group fairness regret and the running
// minimum of the exact exposure slack N_g - floor(beta_g t).
class MetricsAccumulator {
 public:
  MetricsAccumulator(const BanditInstance& instance,
                     const OracleSummary& oracle, const FairnessConfig& beta,
                     std::vector<std::int64_t> checkpoints);

  void record_step(const StepDecision& decision, double reward,
                   const LearnerState& state_after);

  double pseudo_regret(const LearnerState& state) const;
  // (term1, term2, residual) at the current state.
  struct Decomposition {
    double term1;
    double term2;
    double residual;
  };
  Decomposition decomposition_check(const LearnerState& state) const;

  FinalMetrics finalize(const LearnerState& state) const;
  const std::vector<SnapshotRow>& rows() const { return rows_; }
  int smallest_group() const { return smallest_group_; }

 private:
  void snapshot(const LearnerState& state);

  const BanditInstance* instance_;
  const OracleSummary* oracle_;
  const FairnessConfig* beta_;
  std::vector<std::int64_t> checkpoints_;
  std::size_t next_checkpoint_ = 0;
  int smallest_group_ = 0;

  KahanSum realized_;
  KahanSum expected_;
  KahanSum term2_;
  std::vector<KahanSum> fr_;
  std::vector<std::int64_t> min_slack_;
  double residual_max_ = 0.0;
  std::vector<SnapshotRow> rows_;
};

}  // namespace fairmab
