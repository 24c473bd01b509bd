#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairmab/merit.hpp"

namespace fairmab {

// Per-arm confidence intervals for one group, clipped into the merit
// evaluation domain. Widths follow the anytime rule
//   w_g = sqrt(2 ln(4 N_g k_g / delta)),  w_i = w_g / sqrt(N_i).
struct ConfidenceRegion {
  std::vector<double> mu_hat;
  std::vector<double> width;
  std::vector<double> lo;
  std::vector<double> hi;
  double group_width = 0.0;      // w_g before the per-arm 1/sqrt(N_i) scaling
  std::int64_t group_pulls = 0;  // N_g
  double delta = 0.0;
  double domain_lo = 0.0;
  double domain_hi = 1.0;

  int size() const { return static_cast<int>(mu_hat.size()); }
  void resize(int k);
};

// Builds the region for a group given group-local pull counts and reward
// sums. Preconditions: every count >= 1, group_pulls >= k, 0 < delta < 1.
// Throws std::invalid_argument when violated (the initialization phase of the
// policies guarantees them during simulation).
ConfidenceRegion build_region(std::span<const std::int64_t> counts,
                              std::span<const double> sums,
                              std::int64_t group_pulls, double delta,
                              const MeritSpec& merit);

// Same, writing into an existing region to avoid per-step allocation.
void build_region_into(ConfidenceRegion& region,
                       std::span<const std::int64_t> counts,
                       std::span<const double> sums, std::int64_t group_pulls,
                       double delta, const MeritSpec& merit);

// Merit-weighted expected reward of a group at mean vector mu:
//   R_g(mu) = sum_i f(mu_i) mu_i / sum_j f(mu_j).
double group_value(std::span<const double> mu, const MeritSpec& merit);

// Grid coordinate-ascent controls for the general optimizer path.
struct OptimizerConfig {
  int grid_points = 33;
  int max_sweeps = 20;
  double tol = 1e-10;
};

// The mean vector in the region maximizing R_g, the induced policy
// pi_i = f(mu_i)/sum f, and the achieved value.
struct OptimisticEstimate {
  std::vector<double> mu_tilde;
  std::vector<double> pi;
  double value = 0.0;
};

// argmax of R_g over the region. Identity merit with every interval inside
// [0.5, 1] takes the exact upper-corner fast path; otherwise coordinate
// ascent over a per-arm grid, started from the upper corner, with ties
// resolved toward larger means.
OptimisticEstimate optimistic_means(const ConfidenceRegion& region,
                                    const MeritSpec& merit,
                                    const OptimizerConfig& cfg = {});
void optimistic_means_into(OptimisticEstimate& out,
                           const ConfidenceRegion& region,
                           const MeritSpec& merit, const OptimizerConfig& cfg);

// Optimistic value alone, reusing caller scratch for the argmax point.
// Equivalent to optimistic_means(...).value without building the policy.
double optimistic_value(const ConfidenceRegion& region, const MeritSpec& merit,
                        const OptimizerConfig& cfg,
                        std::vector<double>& point_scratch);

// argmin counterpart (lower-corner fast path, ties toward smaller means).
// Consumed only by statistical checks, never by the decision loop.
std::vector<double> pessimistic_means(const ConfidenceRegion& region,
                                      const MeritSpec& merit,
                                      const OptimizerConfig& cfg = {});

// j-th of n grid points on [lo, hi]; endpoints are returned exactly.
inline double grid_point(double lo, double hi, int j, int n) {
  if (j <= 0) return lo;
  if (j >= n - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1);
}

}  // namespace fairmab
