#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fairmab/runner.hpp"

namespace fairmab {

// Schema/syntax problem in a config document; distinct from semantic
// constraint violations so the CLI can map them to different exit codes.
class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  RunConfig run;
  // Merit construction can fail on assumption violations (gamma1 <= 0,
  // decreasing form); those are semantic constraints, not schema errors, so
  // the failure is carried here and run.merit is left unusable.
  std::string merit_error;

  bool merit_ok() const { return merit_error.empty(); }

  // Canonical round-trippable echo of the effective configuration (defaults
  // materialized, presets expanded, overrides applied, shares reduced).
  std::string resolved_text() const;
};

// Parses the JSON experiment document. Unknown keys are rejected. Throws
// ConfigParseError on syntax/schema problems; semantic constraints are
// reported by constraint_report instead.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct ConstraintCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

// Every semantic check, pass or fail, in a fixed order.
std::vector<ConstraintCheck> constraint_report(const ExperimentConfig& config);

struct CliOverrides {
  std::optional<std::int64_t> horizon;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<Algorithm>> algorithms;
};

void apply_overrides(ExperimentConfig& config, const CliOverrides& overrides);

}  // namespace fairmab
