#include "fairmab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "fairmab/oracle.hpp"

namespace fairmab {

std::vector<std::string> validate_run_config(const RunConfig& config) {
  std::vector<std::string> errors;
  if (config.runs < 1) errors.push_back("runs must be >= 1");
  if (config.horizon < 1) errors.push_back("horizon must be >= 1");
  if (config.algorithms.empty()) errors.push_back("no algorithms selected");
  if (!(config.delta > 0.0 && config.delta < 1.0))
    errors.push_back("delta must lie in (0,1)");

  const bool has_fixed = config.instance.fixed.has_value();
  const bool has_generator = config.instance.generator.has_value();
  if (has_fixed == has_generator) {
    errors.push_back("instance must be exactly one of explicit or generated");
    return errors;
  }
  if (has_fixed && config.instance.regenerate_per_run)
    errors.push_back("explicit instance cannot regenerate per run");

  int num_groups = 0;
  std::int64_t t_init = 0;
  if (has_fixed) {
    const auto report = validate_instance(*config.instance.fixed);
    for (const auto& e : report.errors) errors.push_back("instance: " + e);
    if (!report.ok()) return errors;
    num_groups = config.instance.fixed->partition.num_groups();
    t_init = static_cast<std::int64_t>(num_groups) *
             config.instance.fixed->partition.max_group_size();
    for (double mu : config.instance.fixed->means)
      if (!config.merit.in_domain(mu)) {
        errors.push_back("instance mean outside merit evaluation domain [" +
                         std::to_string(config.merit.domain_lo) + ", 1]");
        break;
      }
  } else {
    const auto& gen = *config.instance.generator;
    if (gen.sizes.empty() || gen.sizes.size() != gen.ranges.size()) {
      errors.push_back("generator: sizes/ranges mismatch");
      return errors;
    }
    num_groups = static_cast<int>(gen.sizes.size());
    int max_size = 0;
    for (int k : gen.sizes) {
      if (k < 1) errors.push_back("generator: group size must be >= 1");
      max_size = std::max(max_size, k);
    }
    t_init = static_cast<std::int64_t>(num_groups) * max_size;
    for (const auto& [lo, hi] : gen.ranges) {
      if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
        errors.push_back("generator: mean range outside [0,1]");
      else if (!config.merit.in_domain(lo))
        errors.push_back("generator: mean range dips below the merit domain");
    }
  }

  for (const auto& v : config.beta.violations(num_groups)) errors.push_back(v);
  if (config.horizon < t_init)
    errors.push_back("horizon " + std::to_string(config.horizon) +
                     " is shorter than the warm-up t_init = " +
                     std::to_string(t_init));
  if (config.checkpoints_per_decade < 1)
    errors.push_back("checkpoints_per_decade must be >= 1");
  if (config.optimizer.grid_points < 2)
    errors.push_back("optimizer grid must have >= 2 points");
  if (config.optimizer.max_sweeps < 1)
    errors.push_back("optimizer sweeps must be >= 1");
  if (config.shared_noise && config.instance.regenerate_per_run)
    errors.push_back("shared_noise requires a fixed (non-regenerating) instance");
  return errors;
}

BanditInstance instance_for_run(const RunConfig& config, int run) {
  if (config.instance.fixed) return *config.instance.fixed;
  const auto stream_run = config.instance.regenerate_per_run
                              ? static_cast<std::uint64_t>(run)
                              : std::uint64_t{0};
  RngStream rng(config.seed, stream_run, StreamPurpose::instance);
  return generate_instance(*config.instance.generator, rng);
}

RunResult run_once(const RunConfig& config, Algorithm algo, int run) {
  const BanditInstance instance = instance_for_run(config, run);
  const OracleSummary oracle = build_oracle(instance, config.merit);

  PolicyContext ctx{instance.partition, config.merit, config.beta,
                    config.delta, config.optimizer};
  const auto policy = make_policy(algo, ctx);

  RngStream policy_rng(config.seed, static_cast<std::uint64_t>(run),
                       StreamPurpose::policy, algorithm_id(algo));
  const std::uint64_t reward_tag =
      config.shared_noise ? 0 : algorithm_id(algo);
  RewardSampler sampler(instance,
                        RngStream(config.seed, static_cast<std::uint64_t>(run),
                                  StreamPurpose::reward, reward_tag));

  LearnerState state(instance.partition);
  MetricsAccumulator metrics(
      instance, oracle, config.beta,
      checkpoint_schedule(config.horizon, config.checkpoints_per_decade,
                          config.extra_checkpoints));

  for (std::int64_t t = 0; t < config.horizon; ++t) {
    const StepDecision decision = policy->select(state, policy_rng);
    const double reward = sampler.sample(decision.arm);
    state.update(decision, reward);
    metrics.record_step(decision, reward, state);
  }

  RunResult result;
  result.algo = algo;
  result.run = run;
  result.rows = metrics.rows();
  result.final = metrics.finalize(state);
  return result;
}

int default_worker_count() {
  if (const char* env = std::getenv("FAIRMAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

}  // namespace

const Series* AggregateResult::curve(Algorithm algo, Metric metric,
                                     int entity) const {
  const auto it = curves.find({static_cast<int>(algo),
                               static_cast<int>(metric), entity});
  return it == curves.end() ? nullptr : &it->second;
}

const AlgoSummary& AggregateResult::summary(Algorithm algo) const {
  return summaries.at(static_cast<int>(algo));
}

AggregateResult run_experiment(const RunConfig& config, int workers) {
  {
    const auto errors = validate_run_config(config);
    if (!errors.empty())
      throw std::invalid_argument("run config invalid: " + errors.front());
  }

  AggregateResult agg;
  agg.horizon = config.horizon;
  agg.runs = config.runs;
  agg.algorithms = config.algorithms;
  if (std::find(agg.algorithms.begin(), agg.algorithms.end(),
                Algorithm::ucb1) == agg.algorithms.end())
    agg.algorithms.push_back(Algorithm::ucb1);  // normalization denominator

  const int num_algos = static_cast<int>(agg.algorithms.size());
  const int total_tasks = num_algos * config.runs;
  agg.results.resize(static_cast<std::size_t>(total_tasks));

  if (workers <= 0) workers = default_worker_count();
  workers = std::min(workers, total_tasks);

  std::atomic<int> next{0};
  auto work = [&] {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= total_tasks) return;
      const Algorithm algo =
          agg.algorithms[static_cast<std::size_t>(task / config.runs)];
      const int run = task % config.runs;
      agg.results[static_cast<std::size_t>(task)] =
          run_once(config, algo, run);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Curves: runs share the checkpoint grid, so aggregate position-wise.
  for (int a = 0; a < num_algos; ++a) {
    const Algorithm algo = agg.algorithms[static_cast<std::size_t>(a)];
    const auto* first =
        &agg.results[static_cast<std::size_t>(a * config.runs)];
    for (std::size_t i = 0; i < first->rows.size(); ++i) {
      const auto& row = first->rows[i];
      auto& series = agg.curves[{static_cast<int>(algo),
                                 static_cast<int>(row.metric), row.entity}];
      std::vector<double> values;
      values.reserve(static_cast<std::size_t>(config.runs));
      for (int r = 0; r < config.runs; ++r) {
        const auto& res =
            agg.results[static_cast<std::size_t>(a * config.runs + r)];
        values.push_back(res.rows[i].value);
      }
      const auto ms = mean_std(values);
      series.t.push_back(row.t);
      series.mean.push_back(ms.mean);
      series.stddev.push_back(ms.stddev);
    }
  }

  // Per-algorithm final summaries.
  const int ucb1_pos = [&] {
    for (int a = 0; a < num_algos; ++a)
      if (agg.algorithms[static_cast<std::size_t>(a)] == Algorithm::ucb1)
        return a;
    return -1;
  }();
  for (int a = 0; a < num_algos; ++a) {
    const Algorithm algo = agg.algorithms[static_cast<std::size_t>(a)];
    AlgoSummary summary;
    std::vector<double> pseudo, realized, normalized, term1, term2, resmax;
    for (int r = 0; r < config.runs; ++r) {
      const auto& f =
          agg.results[static_cast<std::size_t>(a * config.runs + r)].final;
      pseudo.push_back(f.pseudo_regret);
      realized.push_back(f.realized_reward);
      term1.push_back(f.term1);
      term2.push_back(f.term2);
      resmax.push_back(f.residual_max);
      const auto& ucb1_final =
          agg.results[static_cast<std::size_t>(ucb1_pos * config.runs + r)]
              .final;
      normalized.push_back(f.realized_reward / ucb1_final.realized_reward);
    }
    summary.pseudo_regret = mean_std(pseudo);
    summary.realized_reward = mean_std(realized);
    summary.normalized_reward = mean_std(normalized);
    summary.term1 = mean_std(term1);
    summary.term2 = mean_std(term2);
    summary.residual_max = mean_std(resmax);

    const auto& first_final =
        agg.results[static_cast<std::size_t>(a * config.runs)].final;
    const int m = static_cast<int>(first_final.groups.size());
    for (int g = 0; g < m; ++g) {
      std::vector<double> pulls, slack, fr;
      for (int r = 0; r < config.runs; ++r) {
        const auto& f =
            agg.results[static_cast<std::size_t>(a * config.runs + r)].final;
        const auto& report = f.groups[static_cast<std::size_t>(g)];
        pulls.push_back(static_cast<double>(report.pulls));
        slack.push_back(static_cast<double>(report.min_gef_slack));
        if (report.fr_defined) fr.push_back(report.normalized_fr);
      }
      summary.groups.push_back(
          {mean_std(pulls), mean_std(slack), mean_std(fr)});
    }

    // Per-arm exposure for the smallest group (instances of one config share
    // the same partition shape even when means regenerate).
    int smallest = 0;
    const auto sample_instance = instance_for_run(config, 0);
    for (int g = 1; g < sample_instance.partition.num_groups(); ++g)
      if (sample_instance.partition.group_size(g) <
          sample_instance.partition.group_size(smallest))
        smallest = g;
    summary.smallest_group = smallest;
    summary.smallest_group_arms =
        sample_instance.partition.groups[static_cast<std::size_t>(smallest)];
    for (int arm : summary.smallest_group_arms) {
      std::vector<double> pulls;
      for (int r = 0; r < config.runs; ++r) {
        const auto& f =
            agg.results[static_cast<std::size_t>(a * config.runs + r)].final;
        pulls.push_back(
            static_cast<double>(f.arm_pulls[static_cast<std::size_t>(arm)]));
      }
      summary.smallest_group_arm_pulls.push_back(mean_std(pulls));
    }
    agg.summaries.emplace(static_cast<int>(algo), std::move(summary));
  }
  return agg;
}

}  // namespace fairmab
