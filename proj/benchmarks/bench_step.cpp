// Hot-loop microbenchmarks: one decision step per policy on both experiment
// presets, plus the confidence-region optimizer in isolation.

#include <benchmark/benchmark.h>

#include "fairmab/confreg.hpp"
#include "fairmab/oracle.hpp"
#include "fairmab/runner.hpp"

namespace {

using namespace fairmab;

struct Rig {
  BanditInstance instance;
  PolicyContext ctx;
  std::unique_ptr<Policy> policy;
  LearnerState state;
  RngStream policy_rng;
  RewardSampler sampler;

  Rig(Algorithm algo, const GeneratorSpec& gen)
      : instance(make_instance(gen)),
        ctx{instance.partition, make_identity_merit(1e-3),
            FairnessConfig::parse({"2/5", "2/5"}), 0.01, {}},
        policy(make_policy(algo, ctx)),
        state(instance.partition),
        policy_rng(1, 0, StreamPurpose::policy, algorithm_id(algo)),
        sampler(instance, RngStream(1, 0, StreamPurpose::reward)) {
    // Warm past the initialization phase so the benchmark hits the main loop.
    for (std::int64_t t = 0; t < 4 * state.t_init; ++t) step();
  }

  static BanditInstance make_instance(const GeneratorSpec& gen) {
    RngStream rng(1, 0, StreamPurpose::instance);
    return generate_instance(gen, rng);
  }

  void step() {
    const auto d = policy->select(state, policy_rng);
    state.update(d, sampler.sample(d.arm));
  }
};

GeneratorSpec low_arms() {
  GeneratorSpec gen;
  gen.sizes = {5, 10};
  gen.ranges = {{0.6, 0.85}, {0.6, 0.85}};
  return gen;
}

GeneratorSpec high_arms() {
  GeneratorSpec gen;
  gen.sizes = {10, 50};
  gen.ranges = {{0.5, 0.8}, {0.7, 1.0}};
  return gen;
}

void BM_step(benchmark::State& bench_state, Algorithm algo,
             const GeneratorSpec& gen) {
  Rig rig(algo, gen);
  for (auto _ : bench_state) {
    rig.step();
    benchmark::DoNotOptimize(rig.state.t);
  }
}

void BM_optimizer(benchmark::State& bench_state, int k, double lo_base) {
  const auto merit = make_identity_merit(1e-3);
  ConfidenceRegion region;
  region.resize(k);
  region.domain_lo = merit.domain_lo;
  region.domain_hi = 1.0;
  region.group_pulls = 1000;
  region.delta = 0.01;
  for (int i = 0; i < k; ++i) {
    region.lo[static_cast<std::size_t>(i)] = lo_base + 0.002 * i;
    region.hi[static_cast<std::size_t>(i)] = lo_base + 0.3;
    region.mu_hat[static_cast<std::size_t>(i)] = lo_base + 0.15;
    region.width[static_cast<std::size_t>(i)] = 0.15;
  }
  OptimisticEstimate est;
  for (auto _ : bench_state) {
    optimistic_means_into(est, region, merit, {});
    benchmark::DoNotOptimize(est.value);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_step, bf_ucb_low, Algorithm::bf_ucb, low_arms());
BENCHMARK_CAPTURE(BM_step, bf_ucb_high, Algorithm::bf_ucb, high_arms());
BENCHMARK_CAPTURE(BM_step, ucb1_high, Algorithm::ucb1, high_arms());
BENCHMARK_CAPTURE(BM_step, mf_ucb_high, Algorithm::mf_ucb, high_arms());
BENCHMARK_CAPTURE(BM_step, gef_ucb_high, Algorithm::gef_ucb, high_arms());
BENCHMARK_CAPTURE(BM_optimizer, corner_fast_path, 50, 0.55);
BENCHMARK_CAPTURE(BM_optimizer, coordinate_ascent, 50, 0.25);

BENCHMARK_MAIN();
