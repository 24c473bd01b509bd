#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "fairmab/env.hpp"
#include "fairmab/fairness.hpp"
#include "fairmab/merit.hpp"
#include "fairmab/metrics.hpp"
#include "fairmab/policies.hpp"

namespace fairmab {

// Where a run's instance comes from: a fixed explicit instance, or a
// generator spec (optionally re-drawn per run with independent streams).
struct InstanceSource {
  std::optional<BanditInstance> fixed;
  std::optional<GeneratorSpec> generator;
  bool regenerate_per_run = false;
};

struct RunConfig {
  std::int64_t horizon = 100000;
  int runs = 1;
  std::uint64_t seed = 1;
  int checkpoints_per_decade = 16;
  std::vector<std::int64_t> extra_checkpoints;
  // When true (and the instance is fixed), all algorithms share reward draws
  // per (arm, pull ordinal); default is independent streams per algorithm.
  bool shared_noise = false;
  std::vector<Algorithm> algorithms{Algorithm::bf_ucb};
  InstanceSource instance;
  FairnessConfig beta;
  MeritSpec merit;
  double delta = 0.01;
  OptimizerConfig optimizer;
};

// Cross-field validation (horizon vs warm-up length, instance vs merit
// domain, beta constraints). Empty result means runnable.
std::vector<std::string> validate_run_config(const RunConfig& config);

// The instance run `run` plays against. Deterministic in (seed, run).
BanditInstance instance_for_run(const RunConfig& config, int run);

struct RunResult {
  Algorithm algo{};
  int run = 0;
  std::vector<SnapshotRow> rows;
  FinalMetrics final;
};

// One full simulation: select -> sample -> update -> record, T rounds.
RunResult run_once(const RunConfig& config, Algorithm algo, int run);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single run
};

struct Series {
  std::vector<std::int64_t> t;
  std::vector<double> mean;
  std::vector<double> stddev;
};

struct GroupSummary {
  MeanStd pulls;
  MeanStd min_gef_slack;
  MeanStd normalized_fr;
};

struct AlgoSummary {
  MeanStd pseudo_regret;
  MeanStd realized_reward;
  MeanStd normalized_reward;  // realized / same-run ucb1 realized
  MeanStd term1;
  MeanStd term2;
  MeanStd residual_max;
  std::vector<GroupSummary> groups;
  int smallest_group = 0;
  std::vector<int> smallest_group_arms;
  std::vector<MeanStd> smallest_group_arm_pulls;
};

struct AggregateResult {
  std::int64_t horizon = 0;
  int runs = 0;
  std::vector<Algorithm> algorithms;  // effective order, ucb1 appended if implied
  std::vector<RunResult> results;     // ordered by (algorithm position, run)
  // (algorithm, metric, entity) -> aggregated curve over the checkpoint grid.
  std::map<std::tuple<int, int, int>, Series> curves;
  std::map<int, AlgoSummary> summaries;  // keyed by static_cast<int>(Algorithm)

  const Series* curve(Algorithm algo, Metric metric, int entity = -1) const;
  const AlgoSummary& summary(Algorithm algo) const;
};

// FAIRMAB_WORKERS, else hardware concurrency.
int default_worker_count();

// Runs every (algorithm, run) pair, in parallel up to `workers` threads
// (0 = default_worker_count()). Results and aggregates are merged in a fixed
// order, so the output is bit-identical for any worker count. UCB1 runs are
// added when absent: the normalized-reward summary needs the same-run UCB1
// denominator.
AggregateResult run_experiment(const RunConfig& config, int workers = 0);

}  // namespace fairmab
