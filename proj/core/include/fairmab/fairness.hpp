#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fairmab {

// One group's exposure share beta_g = num/den, reduced, den > 0.
// Kept as an exact rational because the anytime guarantee floor(beta_g * t)
// is an exact integer claim; binary floating point misplaces it at the
// boundary (e.g. 0.3 * 10 < 3 in doubles).
struct GroupShare {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double as_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

// Parses "p/q" or a decimal literal ("0.4", ".25") into a reduced rational.
// Throws std::invalid_argument on syntax errors or unrepresentable values.
GroupShare parse_share(const std::string& text);

class FairnessConfig {
 public:
  FairnessConfig() = default;
  explicit FairnessConfig(std::vector<GroupShare> beta) : beta_(std::move(beta)) {}

  static FairnessConfig parse(const std::vector<std::string>& texts);

  int num_groups() const { return static_cast<int>(beta_.size()); }
  const GroupShare& share(int g) const { return beta_[static_cast<std::size_t>(g)]; }

  // Constraint checks in exact arithmetic: 0 < beta_g <= 1/m for all g and
  // sum_g beta_g < 1. Returns human-readable violations; empty means valid.
  std::vector<std::string> violations(int num_groups) const;

  // floor(beta_g * t), exact.
  std::int64_t floor_at(int g, std::int64_t t) const;

  // beta_g * t - pulls > 0, exact.
  bool slack_positive(int g, std::int64_t t, std::int64_t pulls) const;

  // Sign of (beta_g1*t - pulls1) - (beta_g2*t - pulls2), exact.
  int compare_slack(int g1, std::int64_t pulls1, int g2, std::int64_t pulls2,
                    std::int64_t t) const;

  std::string share_text(int g) const;

 private:
  std::vector<GroupShare> beta_;
};

}  // namespace fairmab
