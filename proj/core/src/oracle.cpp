#include "fairmab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fairmab {

std::vector<double> optimal_policy(std::span<const double> group_means,
                                   const MeritSpec& merit) {
  if (group_means.empty())
    throw std::invalid_argument("optimal_policy: empty group");
  std::vector<double> pi(group_means.size());
  double total = 0.0;
  for (std::size_t i = 0; i < group_means.size(); ++i) {
    pi[i] = merit.value(group_means[i]);
    total += pi[i];
  }
  for (double& p : pi) p /= total;
  return pi;
}

std::pair<int, std::vector<double>> optimal_group(const BanditInstance& instance,
                                                  const MeritSpec& merit) {
  const auto& part = instance.partition;
  std::vector<double> values(static_cast<std::size_t>(part.num_groups()));
  std::vector<double> means;
  for (int g = 0; g < part.num_groups(); ++g) {
    means.clear();
    for (int arm : part.groups[static_cast<std::size_t>(g)])
      means.push_back(instance.means[static_cast<std::size_t>(arm)]);
    values[static_cast<std::size_t>(g)] = group_value(means, merit);
  }
  int best = 0;
  for (int g = 1; g < part.num_groups(); ++g)
    if (values[static_cast<std::size_t>(g)] >
        values[static_cast<std::size_t>(best)])
      best = g;
  return {best, std::move(values)};
}

OracleSummary build_oracle(const BanditInstance& instance,
                           const MeritSpec& merit) {
  OracleSummary oracle;
  const auto& part = instance.partition;
  auto [g_star, values] = optimal_group(instance, merit);
  oracle.g_star = g_star;
  oracle.r_star = std::move(values);

  oracle.pi_star.reserve(static_cast<std::size_t>(part.num_groups()));
  std::vector<double> means;
  for (int g = 0; g < part.num_groups(); ++g) {
    means.clear();
    for (int arm : part.groups[static_cast<std::size_t>(g)])
      means.push_back(instance.means[static_cast<std::size_t>(arm)]);
    oracle.pi_star.push_back(optimal_policy(means, merit));
  }

  oracle.gaps.resize(oracle.r_star.size());
  const double top = oracle.r_star[static_cast<std::size_t>(oracle.g_star)];
  double min_positive = 0.0;
  for (std::size_t g = 0; g < oracle.r_star.size(); ++g) {
    oracle.gaps[g] = top - oracle.r_star[g];
    if (static_cast<int>(g) != oracle.g_star && oracle.gaps[g] == 0.0)
      oracle.g_star_unique = false;
    if (oracle.gaps[g] > 0.0 &&
        (min_positive == 0.0 || oracle.gaps[g] < min_positive))
      min_positive = oracle.gaps[g];
  }
  oracle.delta_min = min_positive;
  return oracle;
}

double optimal_reward(const OracleSummary& oracle, const FairnessConfig& beta,
                      std::int64_t horizon) {
  std::int64_t floored_total = 0;
  double reward = 0.0;
  for (std::size_t g = 0; g < oracle.r_star.size(); ++g) {
    const std::int64_t f = beta.floor_at(static_cast<int>(g), horizon);
    floored_total += f;
    reward += static_cast<double>(f) * oracle.r_star[g];
  }
  reward += static_cast<double>(horizon - floored_total) *
            oracle.r_star[static_cast<std::size_t>(oracle.g_star)];
  return reward;
}

BoundParameters make_bound_parameters(const OracleSummary& oracle,
                                      const MeritSpec& merit,
                                      const BanditInstance& instance,
                                      const FairnessConfig& beta, double delta,
                                      double lipschitz_l1) {
  BoundParameters params;
  params.lipschitz_l1 = lipschitz_l1;
  const auto bounds = merit_bounds(merit);
  params.gamma1 = bounds.gamma1;
  params.gamma2 = bounds.gamma2;
  params.delta_min = oracle.delta_min;
  params.delta = delta;
  for (int g = 0; g < instance.partition.num_groups(); ++g)
    params.group_sizes.push_back(instance.partition.group_size(g));
  params.gaps = oracle.gaps;
  params.beta = beta;
  return params;
}

double theoretical_bound(const BoundParameters& params,
                         std::span<const std::int64_t> group_pulls,
                         std::int64_t horizon) {
  if (!(params.delta_min > 0.0))
    throw std::domain_error("theoretical_bound: no sub-optimal group");
  const std::size_t m = params.gaps.size();
  if (group_pulls.size() != m || params.group_sizes.size() != m)
    throw std::invalid_argument("theoretical_bound: group count mismatch");

  double gap_sum = 0.0;
  for (double d : params.gaps) gap_sum += d;
  double bound = (1.0 + std::numbers::pi * std::numbers::pi / 3.0) * gap_sum;

  for (std::size_t g = 0; g < m; ++g)
    bound += std::sqrt(static_cast<double>(group_pulls[g]) *
                       params.group_sizes[g]) *
             (1.0 - params.delta);
  bound += params.delta * static_cast<double>(horizon);

  // Excess sub-optimal pulls; the bracket upper-bounds a count, so negative
  // values clamp to zero.
  const double l1_term =
      8.0 * params.lipschitz_l1 * params.lipschitz_l1 /
      (params.delta_min * params.delta_min);
  for (std::size_t g = 0; g < m; ++g) {
    if (params.gaps[g] <= 0.0) continue;
    const double n_g = static_cast<double>(group_pulls[g]);
    const double k_g = static_cast<double>(params.group_sizes[g]);
    const double pulls_needed =
        k_g * params.gamma2 / params.gamma1 *
        (l1_term * std::log(4.0 * n_g * k_g / params.delta) +
         std::sqrt(n_g * std::log(k_g / params.delta) / 2.0));
    const double beta_t =
        params.beta.share(static_cast<int>(g)).as_double() *
        static_cast<double>(horizon);
    bound += std::max(0.0, pulls_needed - beta_t) * params.gaps[g];
  }
  return bound;
}

double estimate_L1(const MeritSpec& merit, const BanditInstance& instance,
                   RngStream& rng, int samples) {
  const auto& part = instance.partition;
  const double lo = merit.domain_lo;
  const double hi = merit.domain_hi;
  double worst = 0.0;
  std::vector<double> mu;
  for (int s = 0; s < samples; ++s) {
    const int g = s % part.num_groups();
    const int k = part.group_size(g);
    mu.resize(static_cast<std::size_t>(k));
    for (double& x : mu) x = lo + (hi - lo) * rng.next_u01();
    const int coord = static_cast<int>(rng.next_u64() %
                                       static_cast<std::uint64_t>(k));
    // Perturbation magnitude in [1e-3, 0.1] with random sign, re-clipped into
    // the domain; a clip can only shrink it, never to zero from a positive
    // magnitude unless the coordinate sits on the boundary (skipped below).
    const double mag = 1e-3 + (0.1 - 1e-3) * rng.next_u01();
    const double sign = rng.next_u64() & 1 ? 1.0 : -1.0;
    const double base = mu[static_cast<std::size_t>(coord)];
    const double moved = std::clamp(base + sign * mag, lo, hi);
    if (moved == base) continue;
    const double v0 = group_value(mu, merit);
    mu[static_cast<std::size_t>(coord)] = moved;
    const double v1 = group_value(mu, merit);
    worst = std::max(worst, std::abs(v1 - v0) / std::abs(moved - base));
  }
  return worst * 1.5;
}

}  // namespace fairmab
