#include "fairmab/io.hpp"

#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

namespace fairmab {

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

std::string format_value(Metric metric, double value) {
  if (metric_is_integral(metric))
    return std::to_string(static_cast<long long>(std::llround(value)));
  return format_double(value);
}

nlohmann::json json_mean_std(const MeanStd& ms) {
  return {{"mean", ms.mean}, {"std", ms.stddev}};
}

}  // namespace

void write_timeseries_csv(std::ostream& out, const AggregateResult& result) {
  out << "algorithm,run,t,metric,group,value\n";
  for (const auto& run : result.results) {
    const auto algo_name = to_string(run.algo);
    for (const auto& row : run.rows) {
      out << algo_name << ',' << run.run << ',' << row.t << ','
          << metric_name(row.metric) << ',';
      if (row.entity >= 0) out << row.entity;
      out << ',' << format_value(row.metric, row.value) << '\n';
    }
  }
}

std::string summary_json(const AggregateResult& result) {
  nlohmann::json doc;
  doc["horizon"] = result.horizon;
  doc["runs"] = result.runs;
  nlohmann::json algos;
  for (const auto algo : result.algorithms) {
    const auto& s = result.summary(algo);
    nlohmann::json a;
    a["pseudo_regret"] = json_mean_std(s.pseudo_regret);
    a["realized_reward"] = json_mean_std(s.realized_reward);
    a["normalized_reward"] = json_mean_std(s.normalized_reward);
    a["term1"] = json_mean_std(s.term1);
    a["term2"] = json_mean_std(s.term2);
    a["residual_max"] = json_mean_std(s.residual_max);
    nlohmann::json groups = nlohmann::json::array();
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
      groups.push_back({{"group", g},
                        {"N_g_T", json_mean_std(s.groups[g].pulls)},
                        {"min_gef_slack", json_mean_std(s.groups[g].min_gef_slack)},
                        {"normalized_fr", json_mean_std(s.groups[g].normalized_fr)}});
    }
    a["groups"] = groups;
    nlohmann::json arm_pulls = nlohmann::json::array();
    for (std::size_t i = 0; i < s.smallest_group_arms.size(); ++i) {
      arm_pulls.push_back(
          {{"arm", s.smallest_group_arms[i]},
           {"N_i_T", json_mean_std(s.smallest_group_arm_pulls[i])}});
    }
    a["smallest_group"] = s.smallest_group;
    a["smallest_group_arm_pulls"] = arm_pulls;
    algos[std::string(to_string(algo))] = a;
  }
  doc["algorithms"] = algos;
  return doc.dump(2) + "\n";
}

std::string oracle_text(const OracleSummary& oracle,
                        const BoundParameters& params,
                        const FairnessConfig& beta, std::int64_t horizon) {
  nlohmann::json doc;
  doc["g_star"] = oracle.g_star;
  doc["g_star_unique"] = oracle.g_star_unique;
  nlohmann::json groups = nlohmann::json::array();
  for (std::size_t g = 0; g < oracle.r_star.size(); ++g) {
    groups.push_back({{"group", g},
                      {"beta", beta.share_text(static_cast<int>(g))},
                      {"R_star", oracle.r_star[g]},
                      {"Delta", oracle.gaps[g]},
                      {"pi_star", oracle.pi_star[g]}});
  }
  doc["groups"] = groups;
  doc["Delta_min"] = oracle.delta_min;
  doc["horizon"] = horizon;
  doc["optimal_fair_reward"] = optimal_reward(oracle, beta, horizon);
  doc["bound_inputs"] = {{"L1", params.lipschitz_l1},
                         {"gamma1", params.gamma1},
                         {"gamma2", params.gamma2},
                         {"Delta_min", params.delta_min},
                         {"delta", params.delta},
                         {"group_sizes", params.group_sizes}};
  return doc.dump(2) + "\n";
}

}  // namespace fairmab
