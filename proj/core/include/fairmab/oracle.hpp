#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fairmab/confreg.hpp"
#include "fairmab/env.hpp"
#include "fairmab/fairness.hpp"
#include "fairmab/merit.hpp"
#include "fairmab/rng.hpp"

namespace fairmab {

// Ground truth computed from known means: the merit-proportional policy and
// value of every group, the best group, and the gaps regret is measured
// against.
struct OracleSummary {
  std::vector<std::vector<double>> pi_star;  // per group, group-local order
  std::vector<double> r_star;                // R*_g
  int g_star = 0;
  bool g_star_unique = true;  // ties resolve to the lowest index
  std::vector<double> gaps;   // Delta_g = R*_{g*} - R*_g
  double delta_min = 0.0;     // smallest positive gap; 0 when none exists
};

// pi*_g(i) = f(mu_i) / sum_j f(mu_j). Means must lie in the merit domain.
std::vector<double> optimal_policy(std::span<const double> group_means,
                                   const MeritSpec& merit);

// (g*, R*_g for every group), exact group values, ties to the lowest index.
std::pair<int, std::vector<double>> optimal_group(const BanditInstance& instance,
                                                  const MeritSpec& merit);

OracleSummary build_oracle(const BanditInstance& instance,
                           const MeritSpec& merit);

// Optimal fair reward at horizon T: every sub-optimal group pinned to its
// exact floor(beta_g T) pulls, the remainder to the best group. Floors are
// exact integers; the combination is one float expression.
double optimal_reward(const OracleSummary& oracle, const FairnessConfig& beta,
                      std::int64_t horizon);

// Inputs of the diagnostic regret bound.
struct BoundParameters {
  double lipschitz_l1 = 0.0;  // |R_g(mu) - R_g(mu')| <= L1 |mu - mu'|
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double delta_min = 0.0;
  double delta = 0.01;
  std::vector<int> group_sizes;
  std::vector<double> gaps;
  FairnessConfig beta;
};

BoundParameters make_bound_parameters(const OracleSummary& oracle,
                                      const MeritSpec& merit,
                                      const BanditInstance& instance,
                                      const FairnessConfig& beta, double delta,
                                      double lipschitz_l1);

// Evaluates the theoretical regret bound at the realized per-group pulls.
// Bracketed excess-pull terms are floored at zero. Throws std::domain_error
// when no sub-optimal group exists (delta_min <= 0).
double theoretical_bound(const BoundParameters& params,
                         std::span<const std::int64_t> group_pulls,
                         std::int64_t horizon);

// Sampling estimate of the group-value Lipschitz constant: the largest
// |dR_g| / |d mu| over random single-coordinate perturbations, times a 1.5
// safety factor. Deterministic given the stream; extending the budget on the
// same stream never decreases the estimate.
double estimate_L1(const MeritSpec& merit, const BanditInstance& instance,
                   RngStream& rng, int samples = 10000);

}  // namespace fairmab
