#pragma once

#include <ostream>
#include <string>

#include "fairmab/oracle.hpp"
#include "fairmab/runner.hpp"

namespace fairmab {

// Shortest decimal text that parses back to the same double. Locale-free and
// deterministic, so repeated runs emit byte-identical artifacts.
std::string format_double(double value);

// Long-format rows: algorithm,run,t,metric,group,value. The group column is
// empty for global metrics, the group index for per-group metrics, and the
// arm index for arm_pulls (smallest group only). Integral metrics print
// without a decimal point.
void write_timeseries_csv(std::ostream& out, const AggregateResult& result);

// Per-algorithm final aggregates (mean/std across runs), per-group fairness
// summaries, and per-arm pulls of the smallest group.
std::string summary_json(const AggregateResult& result);

// Structured-text rendering of the oracle: pi*_g, g*, R*_g, gaps, the
// optimal fair reward at the configured horizon, and the inputs of the
// theoretical bound.
std::string oracle_text(const OracleSummary& oracle, const BoundParameters& params,
                        const FairnessConfig& beta, std::int64_t horizon);

}  // namespace fairmab
