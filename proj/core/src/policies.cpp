#include "fairmab/policies.hpp"

#include <cmath>
#include <stdexcept>

namespace fairmab {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::bf_ucb: return "bf_ucb";
    case Algorithm::ucb1: return "ucb1";
    case Algorithm::mf_ucb: return "mf_ucb";
    case Algorithm::gef_ucb: return "gef_ucb";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "bf_ucb") return Algorithm::bf_ucb;
  if (name == "ucb1") return Algorithm::ucb1;
  if (name == "mf_ucb") return Algorithm::mf_ucb;
  if (name == "gef_ucb") return Algorithm::gef_ucb;
  return std::nullopt;
}

std::uint64_t algorithm_id(Algorithm algo) {
  return static_cast<std::uint64_t>(algo) + 1;
}

LearnerState::LearnerState(const GroupPartition& partition)
    : arm_pulls(static_cast<std::size_t>(partition.num_arms()), 0),
      reward_sums(static_cast<std::size_t>(partition.num_arms()), 0.0),
      group_pulls(static_cast<std::size_t>(partition.num_groups()), 0),
      t_init(static_cast<std::int64_t>(partition.num_groups()) *
             partition.max_group_size()) {}

void LearnerState::update(const StepDecision& decision, double reward) {
  ++t;
  ++arm_pulls[static_cast<std::size_t>(decision.arm)];
  reward_sums[static_cast<std::size_t>(decision.arm)] += reward;
  ++group_pulls[static_cast<std::size_t>(decision.group)];
  if (phase == Phase::init && t >= t_init) phase = Phase::main;
}

int sample_from_policy(std::span<const double> policy, double u) {
  double cum = 0.0;
  const int k = static_cast<int>(policy.size());
  for (int i = 0; i < k; ++i) {
    cum += policy[static_cast<std::size_t>(i)];
    if (u < cum) return i;
  }
  return k - 1;
}

ExposureEngine::ExposureEngine(PolicyContext ctx) : ctx_(std::move(ctx)) {
  const int n = ctx_.partition.num_arms();
  counts_.reserve(static_cast<std::size_t>(n));
  sums_.reserve(static_cast<std::size_t>(n));
  point_buf_.reserve(static_cast<std::size_t>(n));
}

void ExposureEngine::gather_group(const LearnerState& state, int g) {
  const auto& arms = ctx_.partition.groups[static_cast<std::size_t>(g)];
  counts_.resize(arms.size());
  sums_.resize(arms.size());
  for (std::size_t j = 0; j < arms.size(); ++j) {
    counts_[j] = state.arm_pulls[static_cast<std::size_t>(arms[j])];
    sums_[j] = state.reward_sums[static_cast<std::size_t>(arms[j])];
  }
}

std::span<const double> ExposureEngine::point_mass(int group_size,
                                                   int local_index) {
  point_buf_.assign(static_cast<std::size_t>(group_size), 0.0);
  point_buf_[static_cast<std::size_t>(local_index)] = 1.0;
  return point_buf_;
}

StepDecision ExposureEngine::exposure_select(const LearnerState& state, int g,
                                             RngStream& rng) {
  gather_group(state, g);
  build_region_into(region_, counts_, sums_,
                    state.group_pulls[static_cast<std::size_t>(g)], ctx_.delta,
                    ctx_.merit);
  optimistic_means_into(estimate_, region_, ctx_.merit, ctx_.optimizer);
  const int local = sample_from_policy(estimate_.pi, rng.next_u01());
  StepDecision d;
  d.group = g;
  d.arm = ctx_.partition.groups[static_cast<std::size_t>(g)]
                              [static_cast<std::size_t>(local)];
  d.policy = estimate_.pi;
  return d;
}

double ExposureEngine::optimistic_group_value(const LearnerState& state,
                                              int g) {
  gather_group(state, g);
  build_region_into(region_, counts_, sums_,
                    state.group_pulls[static_cast<std::size_t>(g)], ctx_.delta,
                    ctx_.merit);
  return optimistic_value(region_, ctx_.merit, ctx_.optimizer, value_scratch_);
}

int ExposureEngine::learn_select(const LearnerState& state) {
  int best = 0;
  double best_value = optimistic_group_value(state, 0);
  for (int g = 1; g < ctx_.partition.num_groups(); ++g) {
    const double v = optimistic_group_value(state, g);
    if (v > best_value) {
      best_value = v;
      best = g;
    }
  }
  return best;
}

std::pair<int, bool> ExposureEngine::fair_group(const LearnerState& state) {
  const int m = ctx_.partition.num_groups();
  int starved = -1;
  for (int g = 0; g < m; ++g) {
    if (!ctx_.beta.slack_positive(
            g, state.t, state.group_pulls[static_cast<std::size_t>(g)]))
      continue;
    if (starved < 0 ||
        ctx_.beta.compare_slack(
            g, state.group_pulls[static_cast<std::size_t>(g)], starved,
            state.group_pulls[static_cast<std::size_t>(starved)],
            state.t) > 0)
      starved = g;
  }
  if (starved >= 0) return {starved, true};
  return {learn_select(state), false};
}

StepDecision ExposureEngine::init_select(const LearnerState& state,
                                         RngStream& rng) {
  const int m = ctx_.partition.num_groups();
  const int g = static_cast<int>(state.t % m);
  const auto& arms = ctx_.partition.groups[static_cast<std::size_t>(g)];
  for (std::size_t j = 0; j < arms.size(); ++j) {
    if (state.arm_pulls[static_cast<std::size_t>(arms[j])] == 0) {
      StepDecision d;
      d.group = g;
      d.arm = arms[j];
      d.policy = point_mass(static_cast<int>(arms.size()), static_cast<int>(j));
      return d;
    }
  }
  // Group exhausted before the warm-up ends: fall through to its exposure
  // policy, exactly as the main loop would.
  return exposure_select(state, g, rng);
}

int ExposureEngine::ucb1_argmax(const LearnerState& state,
                                std::span<const int> arms) const {
  const double log_t =
      std::log(static_cast<double>(std::max<std::int64_t>(state.t, 1)));
  int best = arms[0];
  double best_index = -1.0;
  bool first = true;
  for (int arm : arms) {
    const auto pulls = state.arm_pulls[static_cast<std::size_t>(arm)];
    const double mean =
        state.reward_sums[static_cast<std::size_t>(arm)] /
        static_cast<double>(pulls);
    const double index =
        mean + std::sqrt(2.0 * log_t / static_cast<double>(pulls));
    if (first || index > best_index) {
      best_index = index;
      best = arm;
      first = false;
    }
  }
  return best;
}

namespace {

class BfUcbPolicy final : public Policy {
 public:
  explicit BfUcbPolicy(const PolicyContext& ctx) : engine_(ctx) {}
  Algorithm algorithm() const override { return Algorithm::bf_ucb; }

  StepDecision select(const LearnerState& state, RngStream& rng) override {
    if (state.phase == Phase::init) return engine_.init_select(state, rng);
    const auto [g, ufg] = engine_.fair_group(state);
    StepDecision d = engine_.exposure_select(state, g, rng);
    d.ufg_triggered = ufg;
    return d;
  }

 private:
  ExposureEngine engine_;
};

class Ucb1Policy final : public Policy {
 public:
  explicit Ucb1Policy(const PolicyContext& ctx)
      : engine_(ctx), all_arms_(make_all_arms(ctx.partition)) {}
  Algorithm algorithm() const override { return Algorithm::ucb1; }

  StepDecision select(const LearnerState& state, RngStream& rng) override {
    if (state.phase == Phase::init) return engine_.init_select(state, rng);
    const int arm = engine_.ucb1_argmax(state, all_arms_);
    const auto& part = engine_.context().partition;
    const int g = part.group_of(arm);
    const auto& arms = part.groups[static_cast<std::size_t>(g)];
    const int local = local_index_of(arms, arm);
    StepDecision d;
    d.group = g;
    d.arm = arm;
    d.policy = engine_.point_mass(static_cast<int>(arms.size()), local);
    return d;
  }

 private:
  static std::vector<int> make_all_arms(const GroupPartition& part) {
    std::vector<int> arms(static_cast<std::size_t>(part.num_arms()));
    for (int i = 0; i < part.num_arms(); ++i)
      arms[static_cast<std::size_t>(i)] = i;
    return arms;
  }
  static int local_index_of(const std::vector<int>& arms, int arm) {
    for (std::size_t j = 0; j < arms.size(); ++j)
      if (arms[j] == arm) return static_cast<int>(j);
    throw std::logic_error("arm not in its group");
  }

  ExposureEngine engine_;
  std::vector<int> all_arms_;
};

// Exposure over the single pseudo-group of all arms (group pulls = t,
// group size = n). The reported group is the true group of the sampled arm,
// with the played distribution conditioned onto that group.
class MfUcbPolicy final : public Policy {
 public:
  explicit MfUcbPolicy(const PolicyContext& ctx) : engine_(ctx) {}
  Algorithm algorithm() const override { return Algorithm::mf_ucb; }

  StepDecision select(const LearnerState& state, RngStream& rng) override {
    if (state.phase == Phase::init) return engine_.init_select(state, rng);
    const auto& ctx = engine_.context();
    build_region_into(region_, state.arm_pulls, state.reward_sums, state.t,
                      ctx.delta, ctx.merit);
    optimistic_means_into(estimate_, region_, ctx.merit, ctx.optimizer);
    const int arm = sample_from_policy(estimate_.pi, rng.next_u01());
    const int g = ctx.partition.group_of(arm);
    const auto& arms = ctx.partition.groups[static_cast<std::size_t>(g)];

    conditional_.resize(arms.size());
    double mass = 0.0;
    int local = 0;
    for (std::size_t j = 0; j < arms.size(); ++j) {
      conditional_[j] = estimate_.pi[static_cast<std::size_t>(arms[j])];
      mass += conditional_[j];
      if (arms[j] == arm) local = static_cast<int>(j);
    }
    for (double& p : conditional_) p /= mass;

    StepDecision d;
    d.group = g;
    d.arm = arms[static_cast<std::size_t>(local)];
    d.policy = conditional_;
    return d;
  }

 private:
  ExposureEngine engine_;
  ConfidenceRegion region_;
  OptimisticEstimate estimate_;
  std::vector<double> conditional_;
};

// The exposure-floor group stage of bf_ucb, then the plain UCB index within
// the chosen group instead of the merit policy.
class GefUcbPolicy final : public Policy {
 public:
  explicit GefUcbPolicy(const PolicyContext& ctx) : engine_(ctx) {}
  Algorithm algorithm() const override { return Algorithm::gef_ucb; }

  StepDecision select(const LearnerState& state, RngStream& rng) override {
    if (state.phase == Phase::init) return engine_.init_select(state, rng);
    const auto [g, ufg] = engine_.fair_group(state);
    const auto& arms =
        engine_.context().partition.groups[static_cast<std::size_t>(g)];
    const int arm = engine_.ucb1_argmax(state, arms);
    int local = 0;
    for (std::size_t j = 0; j < arms.size(); ++j)
      if (arms[j] == arm) local = static_cast<int>(j);
    StepDecision d;
    d.group = g;
    d.arm = arm;
    d.policy = engine_.point_mass(static_cast<int>(arms.size()), local);
    d.ufg_triggered = ufg;
    return d;
  }

 private:
  ExposureEngine engine_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(Algorithm algo, const PolicyContext& ctx) {
  switch (algo) {
    case Algorithm::bf_ucb: return std::make_unique<BfUcbPolicy>(ctx);
    case Algorithm::ucb1: return std::make_unique<Ucb1Policy>(ctx);
    case Algorithm::mf_ucb: return std::make_unique<MfUcbPolicy>(ctx);
    case Algorithm::gef_ucb: return std::make_unique<GefUcbPolicy>(ctx);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace fairmab
