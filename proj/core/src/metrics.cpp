#include "fairmab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairmab {

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::pseudo_regret: return "pseudo_regret";
    case Metric::realized_reward: return "realized_reward";
    case Metric::term1: return "term1";
    case Metric::term2: return "term2";
    case Metric::fr_norm: return "fr_norm";
    case Metric::gef_slack: return "gef_slack";
    case Metric::group_pulls: return "group_pulls";
    case Metric::arm_pulls: return "arm_pulls";
  }
  return "?";
}

bool metric_is_integral(Metric metric) {
  return metric == Metric::gef_slack || metric == Metric::group_pulls ||
         metric == Metric::arm_pulls;
}

bool metric_is_per_group(Metric metric) {
  return metric == Metric::fr_norm || metric == Metric::gef_slack ||
         metric == Metric::group_pulls;
}

std::vector<std::int64_t> checkpoint_schedule(
    std::int64_t horizon, int per_decade,
    std::span<const std::int64_t> extras) {
  if (horizon < 1) throw std::invalid_argument("checkpoint_schedule: horizon < 1");
  if (per_decade < 1) throw std::invalid_argument("checkpoint_schedule: per_decade < 1");
  std::vector<std::int64_t> points;
  for (std::int64_t t = 1; t <= std::min<std::int64_t>(10, horizon); ++t)
    points.push_back(t);
  for (int k = 1;; ++k) {
    const double e = 1.0 + static_cast<double>(k) / per_decade;
    const double v = std::pow(10.0, e);
    if (v > static_cast<double>(horizon) * (1.0 + 1e-12)) break;
    const auto t = static_cast<std::int64_t>(std::llround(v));
    if (t <= horizon) points.push_back(t);
  }
  points.push_back(horizon);
  for (std::int64_t t : extras)
    if (t >= 1 && t <= horizon) points.push_back(t);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

MetricsAccumulator::MetricsAccumulator(const BanditInstance& instance,
                                       const OracleSummary& oracle,
                                       const FairnessConfig& beta,
                                       std::vector<std::int64_t> checkpoints)
    : instance_(&instance),
      oracle_(&oracle),
      beta_(&beta),
      checkpoints_(std::move(checkpoints)),
      fr_(static_cast<std::size_t>(instance.partition.num_groups())),
      min_slack_(static_cast<std::size_t>(instance.partition.num_groups()),
                 std::numeric_limits<std::int64_t>::max()) {
  for (int g = 1; g < instance.partition.num_groups(); ++g)
    if (instance.partition.group_size(g) <
        instance.partition.group_size(smallest_group_))
      smallest_group_ = g;
}

void MetricsAccumulator::record_step(const StepDecision& decision,
                                     double reward,
                                     const LearnerState& state_after) {
  const auto g = static_cast<std::size_t>(decision.group);
  const auto& arms = instance_->partition.groups[g];
  const auto& pi_star = oracle_->pi_star[g];

  double expected = 0.0;
  double fr_increment = 0.0;
  for (std::size_t j = 0; j < arms.size(); ++j) {
    const double p = decision.policy[j];
    expected += p * instance_->means[static_cast<std::size_t>(arms[j])];
    fr_increment += std::abs(p - pi_star[j]);
  }

  realized_.add(reward);
  expected_.add(expected);
  term2_.add(oracle_->r_star[g] - expected);
  fr_[g].add(fr_increment);

  const std::int64_t t = state_after.t;
  for (int gi = 0; gi < instance_->partition.num_groups(); ++gi) {
    const std::int64_t slack =
        state_after.group_pulls[static_cast<std::size_t>(gi)] -
        beta_->floor_at(gi, t);
    min_slack_[static_cast<std::size_t>(gi)] =
        std::min(min_slack_[static_cast<std::size_t>(gi)], slack);
  }

  if (next_checkpoint_ < checkpoints_.size() &&
      t == checkpoints_[next_checkpoint_]) {
    snapshot(state_after);
    ++next_checkpoint_;
  }
}

double MetricsAccumulator::pseudo_regret(const LearnerState& state) const {
  return optimal_reward(*oracle_, *beta_, state.t) - expected_.value();
}

MetricsAccumulator::Decomposition MetricsAccumulator::decomposition_check(
    const LearnerState& state) const {
  double term1 = 0.0;
  for (int g = 0; g < instance_->partition.num_groups(); ++g) {
    const double excess =
        static_cast<double>(state.group_pulls[static_cast<std::size_t>(g)] -
                            beta_->floor_at(g, state.t));
    term1 += excess * oracle_->gaps[static_cast<std::size_t>(g)];
  }
  const double term2 = term2_.value();
  const double residual = pseudo_regret(state) - term1 - term2;
  return {term1, term2, residual};
}

void MetricsAccumulator::snapshot(const LearnerState& state) {
  const std::int64_t t = state.t;
  const auto d = decomposition_check(state);
  residual_max_ = std::max(residual_max_, std::abs(d.residual));

  rows_.push_back({t, Metric::pseudo_regret, -1, pseudo_regret(state)});
  rows_.push_back({t, Metric::realized_reward, -1, realized_.value()});
  rows_.push_back({t, Metric::term1, -1, d.term1});
  rows_.push_back({t, Metric::term2, -1, d.term2});

  const int m = instance_->partition.num_groups();
  for (int g = 0; g < m; ++g) {
    const auto pulls = state.group_pulls[static_cast<std::size_t>(g)];
    if (pulls >= 1)
      rows_.push_back({t, Metric::fr_norm, g,
                       fr_[static_cast<std::size_t>(g)].value() /
                           static_cast<double>(pulls)});
  }
  for (int g = 0; g < m; ++g)
    rows_.push_back({t, Metric::gef_slack, g,
                     static_cast<double>(min_slack_[static_cast<std::size_t>(g)])});
  for (int g = 0; g < m; ++g)
    rows_.push_back({t, Metric::group_pulls, g,
                     static_cast<double>(
                         state.group_pulls[static_cast<std::size_t>(g)])});
  for (int arm :
       instance_->partition.groups[static_cast<std::size_t>(smallest_group_)])
    rows_.push_back({t, Metric::arm_pulls, arm,
                     static_cast<double>(
                         state.arm_pulls[static_cast<std::size_t>(arm)])});
}

FinalMetrics MetricsAccumulator::finalize(const LearnerState& state) const {
  FinalMetrics out;
  out.pseudo_regret = pseudo_regret(state);
  out.realized_reward = realized_.value();
  out.expected_reward = expected_.value();
  const auto d = decomposition_check(state);
  out.term1 = d.term1;
  out.term2 = d.term2;
  out.residual = d.residual;
  out.residual_max = std::max(residual_max_, std::abs(d.residual));
  const int m = instance_->partition.num_groups();
  out.groups.resize(static_cast<std::size_t>(m));
  for (int g = 0; g < m; ++g) {
    auto& report = out.groups[static_cast<std::size_t>(g)];
    report.pulls = state.group_pulls[static_cast<std::size_t>(g)];
    report.min_gef_slack = min_slack_[static_cast<std::size_t>(g)];
    report.fr_defined = report.pulls >= 1;
    if (report.fr_defined)
      report.normalized_fr = fr_[static_cast<std::size_t>(g)].value() /
                             static_cast<double>(report.pulls);
  }
  out.arm_pulls = state.arm_pulls;
  return out;
}

}  // namespace fairmab
