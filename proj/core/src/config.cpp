#include "fairmab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fairmab {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object())
    throw ConfigParseError(where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key))
      throw ConfigParseError(where + ": unknown key '" + key + "'");
}

template <typename T>
T get_as(const json& obj, const std::string& where, const std::string& key,
         const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigParseError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_required(const json& obj, const std::string& where,
               const std::string& key) {
  if (!obj.contains(key))
    throw ConfigParseError(where + ": missing key '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigParseError(where + "." + key + ": " + e.what());
  }
}

RewardKind parse_reward(const json& obj, const std::string& where) {
  require_keys(obj, where, {"kind", "halfwidth"});
  const auto kind = get_required<std::string>(obj, where, "kind");
  if (kind == "bernoulli") return RewardKind::bernoulli();
  if (kind == "uniform_band")
    return RewardKind::uniform_band(
        get_required<double>(obj, where, "halfwidth"));
  throw ConfigParseError(where + ".kind: unknown reward kind '" + kind + "'");
}

json reward_to_json(const RewardKind& reward) {
  json j;
  if (reward.type == RewardKind::Type::bernoulli) {
    j["kind"] = "bernoulli";
  } else {
    j["kind"] = "uniform_band";
    j["halfwidth"] = reward.halfwidth;
  }
  return j;
}

GeneratorSpec preset_generator(const std::string& name) {
  GeneratorSpec gen;
  if (name == "low_arms") {
    gen.sizes = {5, 10};
    gen.ranges = {{0.6, 0.85}, {0.6, 0.85}};
  } else if (name == "high_arms") {
    gen.sizes = {10, 50};
    gen.ranges = {{0.5, 0.8}, {0.7, 1.0}};
  } else {
    throw ConfigParseError("instance.preset: unknown preset '" + name + "'");
  }
  return gen;
}

InstanceSource parse_instance(const json& obj) {
  require_keys(obj, "instance",
               {"preset", "generator", "explicit", "regenerate_per_run"});
  const int sources = static_cast<int>(obj.contains("preset")) +
                      static_cast<int>(obj.contains("generator")) +
                      static_cast<int>(obj.contains("explicit"));
  if (sources != 1)
    throw ConfigParseError(
        "instance: exactly one of preset/generator/explicit required");

  InstanceSource source;
  if (obj.contains("preset")) {
    source.generator =
        preset_generator(get_required<std::string>(obj, "instance", "preset"));
    source.regenerate_per_run = true;
  } else if (obj.contains("generator")) {
    const auto& gen_obj = obj.at("generator");
    require_keys(gen_obj, "instance.generator", {"sizes", "ranges", "reward"});
    GeneratorSpec gen;
    gen.sizes = get_required<std::vector<int>>(gen_obj, "instance.generator",
                                               "sizes");
    const auto ranges = get_required<std::vector<std::vector<double>>>(
        gen_obj, "instance.generator", "ranges");
    for (const auto& r : ranges) {
      if (r.size() != 2)
        throw ConfigParseError(
            "instance.generator.ranges: each range needs [lo, hi]");
      gen.ranges.emplace_back(r[0], r[1]);
    }
    if (gen_obj.contains("reward"))
      gen.reward = parse_reward(gen_obj.at("reward"),
                                "instance.generator.reward");
    source.generator = gen;
    source.regenerate_per_run = true;
  } else {
    const auto& exp_obj = obj.at("explicit");
    require_keys(exp_obj, "instance.explicit", {"means", "groups", "reward"});
    BanditInstance instance;
    instance.means = get_required<std::vector<double>>(exp_obj,
                                                       "instance.explicit",
                                                       "means");
    instance.partition = GroupPartition(get_required<std::vector<std::vector<int>>>(
        exp_obj, "instance.explicit", "groups"));
    if (exp_obj.contains("reward"))
      instance.reward =
          parse_reward(exp_obj.at("reward"), "instance.explicit.reward");
    source.fixed = std::move(instance);
    source.regenerate_per_run = false;
  }
  if (obj.contains("regenerate_per_run"))
    source.regenerate_per_run =
        get_required<bool>(obj, "instance", "regenerate_per_run");
  return source;
}

// Schema errors (unknown kind, missing parameters) throw; assumption
// violations (gamma1 <= 0, decreasing form) land in merit_error so the CLI
// can report them as constraint failures.
MeritSpec parse_merit(const json& obj, std::string& merit_error) {
  require_keys(obj, "merit", {"kind", "a", "b", "p", "merit_floor"});
  const auto kind = get_as<std::string>(obj, "merit", "kind", "identity");
  const double merit_floor = get_as<double>(obj, "merit", "merit_floor", 1e-3);
  double a = 0.0, b = 0.0, p = 1.0;
  MeritKind merit_kind;
  if (kind == "identity") {
    merit_kind = MeritKind::identity;
  } else if (kind == "affine") {
    merit_kind = MeritKind::affine;
    a = get_required<double>(obj, "merit", "a");
    b = get_required<double>(obj, "merit", "b");
  } else if (kind == "power") {
    merit_kind = MeritKind::power;
    p = get_required<double>(obj, "merit", "p");
  } else {
    throw ConfigParseError("merit.kind: unknown merit '" + kind + "'");
  }
  try {
    return make_merit(merit_kind, a, b, p, merit_floor);
  } catch (const std::invalid_argument& e) {
    merit_error = e.what();
    MeritSpec placeholder;
    placeholder.kind = merit_kind;
    placeholder.a = a;
    placeholder.b = b;
    placeholder.p = p;
    placeholder.domain_lo = merit_floor;
    return placeholder;
  }
}

std::vector<std::string> parse_beta_list(const json& arr) {
  if (!arr.is_array() || arr.empty())
    throw ConfigParseError("fairness.beta: expected a non-empty array");
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_number()) {
      out.push_back(json(v).dump());  // shortest round-trip decimal text
    } else {
      throw ConfigParseError("fairness.beta: entries must be strings or numbers");
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigParseError(std::string("config: ") + e.what());
  }
  require_keys(doc, "config",
               {"experiment", "instance", "fairness", "merit", "delta",
                "optimizer", "algorithms"});

  ExperimentConfig config;
  RunConfig& run = config.run;

  const json exp = doc.value("experiment", json::object());
  require_keys(exp, "experiment",
               {"horizon", "runs", "seed", "checkpoints_per_decade",
                "extra_checkpoints", "shared_noise"});
  // Desk-scale defaults; the 1e7 scale stays available but never implied.
  run.horizon = get_as<std::int64_t>(exp, "experiment", "horizon", 1000000);
  run.runs = get_as<int>(exp, "experiment", "runs", 50);
  run.seed = get_as<std::uint64_t>(exp, "experiment", "seed", 1);
  run.checkpoints_per_decade =
      get_as<int>(exp, "experiment", "checkpoints_per_decade", 16);
  run.extra_checkpoints = get_as<std::vector<std::int64_t>>(
      exp, "experiment", "extra_checkpoints", {});
  run.shared_noise = get_as<bool>(exp, "experiment", "shared_noise", false);

  if (!doc.contains("instance"))
    throw ConfigParseError("config: missing key 'instance'");
  run.instance = parse_instance(doc.at("instance"));

  if (!doc.contains("fairness"))
    throw ConfigParseError("config: missing key 'fairness'");
  require_keys(doc.at("fairness"), "fairness", {"beta"});
  try {
    run.beta = FairnessConfig::parse(
        parse_beta_list(doc.at("fairness").at("beta")));
  } catch (const std::invalid_argument& e) {
    throw ConfigParseError(std::string("fairness.beta: ") + e.what());
  }

  run.merit = parse_merit(doc.value("merit", json::object()), config.merit_error);
  run.delta = get_as<double>(doc, "config", "delta", 0.01);

  const json opt = doc.value("optimizer", json::object());
  require_keys(opt, "optimizer", {"grid", "sweeps", "tol"});
  run.optimizer.grid_points = get_as<int>(opt, "optimizer", "grid", 33);
  run.optimizer.max_sweeps = get_as<int>(opt, "optimizer", "sweeps", 20);
  run.optimizer.tol = get_as<double>(opt, "optimizer", "tol", 1e-10);

  if (doc.contains("algorithms")) {
    run.algorithms.clear();
    for (const auto& name :
         get_required<std::vector<std::string>>(doc, "config", "algorithms")) {
      const auto algo = parse_algorithm(name);
      if (!algo)
        throw ConfigParseError("algorithms: unknown algorithm '" + name + "'");
      run.algorithms.push_back(*algo);
    }
  } else {
    run.algorithms = {Algorithm::bf_ucb, Algorithm::ucb1, Algorithm::mf_ucb,
                      Algorithm::gef_ucb};
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigParseError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string ExperimentConfig::resolved_text() const {
  json doc;
  doc["experiment"] = {
      {"horizon", run.horizon},
      {"runs", run.runs},
      {"seed", run.seed},
      {"checkpoints_per_decade", run.checkpoints_per_decade},
      {"extra_checkpoints", run.extra_checkpoints},
      {"shared_noise", run.shared_noise},
  };
  json inst;
  if (run.instance.fixed) {
    const auto& fixed = *run.instance.fixed;
    inst["explicit"] = {{"means", fixed.means},
                        {"groups", fixed.partition.groups},
                        {"reward", reward_to_json(fixed.reward)}};
  } else {
    const auto& gen = *run.instance.generator;
    json ranges = json::array();
    for (const auto& [lo, hi] : gen.ranges) ranges.push_back({lo, hi});
    inst["generator"] = {{"sizes", gen.sizes},
                         {"ranges", ranges},
                         {"reward", reward_to_json(gen.reward)}};
  }
  inst["regenerate_per_run"] = run.instance.regenerate_per_run;
  doc["instance"] = inst;

  json beta = json::array();
  for (int g = 0; g < run.beta.num_groups(); ++g)
    beta.push_back(run.beta.share_text(g));
  doc["fairness"] = {{"beta", beta}};

  json merit;
  merit["kind"] = to_string(run.merit.kind);
  merit["merit_floor"] = run.merit.domain_lo;
  if (run.merit.kind == MeritKind::affine) {
    merit["a"] = run.merit.a;
    merit["b"] = run.merit.b;
  } else if (run.merit.kind == MeritKind::power) {
    merit["p"] = run.merit.p;
  }
  doc["merit"] = merit;

  doc["delta"] = run.delta;
  doc["optimizer"] = {{"grid", run.optimizer.grid_points},
                      {"sweeps", run.optimizer.max_sweeps},
                      {"tol", run.optimizer.tol}};
  json algos = json::array();
  for (const auto algo : run.algorithms) algos.push_back(to_string(algo));
  doc["algorithms"] = algos;
  return doc.dump(2) + "\n";
}

std::vector<ConstraintCheck> constraint_report(const ExperimentConfig& config) {
  std::vector<ConstraintCheck> checks;
  checks.push_back({"merit positivity", config.merit_ok(), config.merit_error});
  const auto errors =
      config.merit_ok() ? validate_run_config(config.run)
                        : std::vector<std::string>{};
  auto add = [&](const std::string& name, const std::string& prefix) {
    ConstraintCheck check{name, true, ""};
    for (const auto& e : errors) {
      if (e.rfind(prefix, 0) == 0) {
        check.ok = false;
        check.detail = e;
        break;
      }
    }
    checks.push_back(check);
  };
  add("instance", "instance");
  add("generator", "generator");
  add("fairness", "beta");
  add("fairness sum", "sum of beta");
  add("horizon vs warm-up", "horizon");
  add("delta", "delta");
  add("optimizer", "optimizer");
  // Any violation not matched above still fails validation as a whole.
  ConstraintCheck overall{"all constraints",
                          errors.empty() && config.merit_ok(), ""};
  if (!errors.empty()) overall.detail = errors.front();
  checks.push_back(overall);
  return checks;
}

void apply_overrides(ExperimentConfig& config, const CliOverrides& overrides) {
  if (overrides.horizon) config.run.horizon = *overrides.horizon;
  if (overrides.runs) config.run.runs = *overrides.runs;
  if (overrides.seed) config.run.seed = *overrides.seed;
  if (overrides.algorithms) config.run.algorithms = *overrides.algorithms;
}

}  // namespace fairmab
