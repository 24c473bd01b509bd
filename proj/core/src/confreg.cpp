#include "fairmab/confreg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairmab {

void ConfidenceRegion::resize(int k) {
  const auto n = static_cast<std::size_t>(k);
  mu_hat.resize(n);
  width.resize(n);
  lo.resize(n);
  hi.resize(n);
}

void build_region_into(ConfidenceRegion& region,
                       std::span<const std::int64_t> counts,
                       std::span<const double> sums, std::int64_t group_pulls,
                       double delta, const MeritSpec& merit) {
  const int k = static_cast<int>(counts.size());
  if (k == 0 || sums.size() != counts.size())
    throw std::invalid_argument("build_region: counts/sums size mismatch");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("build_region: delta outside (0,1)");
  if (group_pulls < k)
    throw std::invalid_argument("build_region: group pulls below group size");

  region.resize(k);
  region.group_pulls = group_pulls;
  region.delta = delta;
  region.domain_lo = merit.domain_lo;
  region.domain_hi = merit.domain_hi;
  region.group_width = std::sqrt(
      2.0 * std::log(4.0 * static_cast<double>(group_pulls) * k / delta));
  for (int i = 0; i < k; ++i) {
    const auto n_i = counts[static_cast<std::size_t>(i)];
    if (n_i < 1)
      throw std::invalid_argument("build_region: arm with zero pulls");
    const double mean = sums[static_cast<std::size_t>(i)] /
                        static_cast<double>(n_i);
    const double w =
        region.group_width / std::sqrt(static_cast<double>(n_i));
    region.mu_hat[static_cast<std::size_t>(i)] = mean;
    region.width[static_cast<std::size_t>(i)] = w;
    region.lo[static_cast<std::size_t>(i)] =
        std::clamp(mean - w, merit.domain_lo, merit.domain_hi);
    region.hi[static_cast<std::size_t>(i)] =
        std::clamp(mean + w, merit.domain_lo, merit.domain_hi);
  }
}

ConfidenceRegion build_region(std::span<const std::int64_t> counts,
                              std::span<const double> sums,
                              std::int64_t group_pulls, double delta,
                              const MeritSpec& merit) {
  ConfidenceRegion region;
  build_region_into(region, counts, sums, group_pulls, delta, merit);
  return region;
}

double group_value(std::span<const double> mu, const MeritSpec& merit) {
  if (mu.empty()) throw std::invalid_argument("group_value: empty mean vector");
  double num = 0.0, den = 0.0;
  for (double x : mu) {
    const double f = merit.value(x);
    num += f * x;
    den += f;
  }
  return num / den;
}

namespace {

bool upper_corner_is_exact(const ConfidenceRegion& region,
                           const MeritSpec& merit) {
  if (merit.kind != MeritKind::identity) return false;
  for (double lo : region.lo)
    if (lo < 0.5) return false;
  return true;
}

// Coordinate ascent (direction = +1) or descent (direction = -1) of R_g over
// the per-arm grids, starting from `point`. Ties between equal-valued grid
// points resolve toward the optimism direction. Each accepted move keeps the
// running numerator/denominator; they are rebuilt once per sweep to cap
// floating-point drift.
double coordinate_search(std::vector<double>& point,
                         const ConfidenceRegion& region,
                         const MeritSpec& merit, const OptimizerConfig& cfg,
                         int direction) {
  const int k = region.size();
  const int g_pts = std::max(cfg.grid_points, 2);
  std::vector<double> fvals(static_cast<std::size_t>(k));

  double num = 0.0, den = 0.0;
  auto rebuild = [&] {
    num = 0.0;
    den = 0.0;
    for (int i = 0; i < k; ++i) {
      const double f = merit.value(point[static_cast<std::size_t>(i)]);
      fvals[static_cast<std::size_t>(i)] = f;
      num += f * point[static_cast<std::size_t>(i)];
      den += f;
    }
  };
  rebuild();

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double max_gain = 0.0;
    for (int i = 0; i < k; ++i) {
      const double lo = region.lo[static_cast<std::size_t>(i)];
      const double hi = region.hi[static_cast<std::size_t>(i)];
      if (lo == hi) continue;
      const double cur_x = point[static_cast<std::size_t>(i)];
      const double cur_f = fvals[static_cast<std::size_t>(i)];
      const double base_num = num - cur_f * cur_x;
      const double base_den = den - cur_f;
      double best_x = cur_x;
      double best_f = cur_f;
      double best_val = num / den;
      for (int j = 0; j < g_pts; ++j) {
        const double x = grid_point(lo, hi, j, g_pts);
        const double f = merit.value(x);
        const double val = (base_num + f * x) / (base_den + f);
        const bool better = direction > 0 ? val > best_val : val < best_val;
        const bool tie_pref =
            val == best_val && (direction > 0 ? x > best_x : x < best_x);
        if (better || tie_pref) {
          best_val = val;
          best_x = x;
          best_f = f;
        }
      }
      if (best_x != cur_x) {
        const double gain =
            direction > 0 ? best_val - num / den : num / den - best_val;
        max_gain = std::max(max_gain, gain);
        point[static_cast<std::size_t>(i)] = best_x;
        fvals[static_cast<std::size_t>(i)] = best_f;
        num = base_num + best_f * best_x;
        den = base_den + best_f;
      }
    }
    rebuild();
    if (max_gain <= cfg.tol) break;
  }
  return num / den;
}

}  // namespace

void optimistic_means_into(OptimisticEstimate& out,
                           const ConfidenceRegion& region,
                           const MeritSpec& merit, const OptimizerConfig& cfg) {
  const int k = region.size();
  out.mu_tilde.assign(region.hi.begin(), region.hi.end());
  if (!upper_corner_is_exact(region, merit))
    coordinate_search(out.mu_tilde, region, merit, cfg, +1);

  out.pi.resize(static_cast<std::size_t>(k));
  double num = 0.0, den = 0.0;
  for (int i = 0; i < k; ++i) {
    const double f = merit.value(out.mu_tilde[static_cast<std::size_t>(i)]);
    out.pi[static_cast<std::size_t>(i)] = f;
    num += f * out.mu_tilde[static_cast<std::size_t>(i)];
    den += f;
  }
  for (double& p : out.pi) p /= den;
  out.value = num / den;
}

double optimistic_value(const ConfidenceRegion& region, const MeritSpec& merit,
                        const OptimizerConfig& cfg,
                        std::vector<double>& point_scratch) {
  point_scratch.assign(region.hi.begin(), region.hi.end());
  if (!upper_corner_is_exact(region, merit))
    return coordinate_search(point_scratch, region, merit, cfg, +1);
  double num = 0.0, den = 0.0;
  for (double x : point_scratch) {
    const double f = merit.value(x);
    num += f * x;
    den += f;
  }
  return num / den;
}

OptimisticEstimate optimistic_means(const ConfidenceRegion& region,
                                    const MeritSpec& merit,
                                    const OptimizerConfig& cfg) {
  OptimisticEstimate out;
  optimistic_means_into(out, region, merit, cfg);
  return out;
}

std::vector<double> pessimistic_means(const ConfidenceRegion& region,
                                      const MeritSpec& merit,
                                      const OptimizerConfig& cfg) {
  std::vector<double> point(region.lo.begin(), region.lo.end());
  if (!upper_corner_is_exact(region, merit))
    coordinate_search(point, region, merit, cfg, -1);
  return point;
}

}  // namespace fairmab
