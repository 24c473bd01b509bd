// fairmab: group-fair bandit simulations from a JSON experiment config.
//
// Subcommands:
//   validate <config>            check every configuration constraint
//   run      <config> [-o DIR]   simulate and write csv/json artifacts
//   oracle   <config>            print ground-truth summary for the instance
//
// Exit codes: 0 ok, 1 constraint/domain failure, 2 I/O or parse failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairmab/config.hpp"
#include "fairmab/io.hpp"
#include "fairmab/oracle.hpp"
#include "fairmab/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConstraint = 1;
constexpr int kExitIo = 2;

struct RunFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::int64_t horizon = -1;
  int runs = -1;
  std::int64_t seed = -1;
  std::string algos;
  int workers = 0;
};

fairmab::CliOverrides overrides_from(const RunFlags& flags) {
  fairmab::CliOverrides overrides;
  if (flags.horizon >= 0) overrides.horizon = flags.horizon;
  if (flags.runs >= 0) overrides.runs = flags.runs;
  if (flags.seed >= 0) overrides.seed = static_cast<std::uint64_t>(flags.seed);
  if (!flags.algos.empty()) {
    std::vector<fairmab::Algorithm> algos;
    std::stringstream ss(flags.algos);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto algo = fairmab::parse_algorithm(name);
      if (!algo)
        throw fairmab::ConfigParseError("--algos: unknown algorithm '" +
                                        name + "'");
      algos.push_back(*algo);
    }
    overrides.algorithms = std::move(algos);
  }
  return overrides;
}

int cmd_validate(const std::string& path) {
  const auto config = fairmab::parse_config_file(path);
  const auto checks = fairmab::constraint_report(config);
  bool all_ok = true;
  for (const auto& check : checks) {
    std::cout << (check.ok ? "ok  " : "FAIL") << "  " << check.name;
    if (!check.detail.empty()) std::cout << ": " << check.detail;
    std::cout << '\n';
    all_ok = all_ok && check.ok;
  }
  return all_ok ? kExitOk : kExitConstraint;
}

int cmd_run(const RunFlags& flags) {
  auto config = fairmab::parse_config_file(flags.config_path);
  fairmab::apply_overrides(config, overrides_from(flags));
  if (!config.merit_ok()) {
    std::cerr << "constraint: merit: " << config.merit_error << '\n';
    return kExitConstraint;
  }
  const auto errors = fairmab::validate_run_config(config.run);
  if (!errors.empty()) {
    for (const auto& e : errors) std::cerr << "constraint: " << e << '\n';
    return kExitConstraint;
  }

  const auto result = fairmab::run_experiment(config.run, flags.workers);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(flags.out_dir, ec);
  const auto out = fs::path(flags.out_dir);
  {
    std::ofstream csv(out / "timeseries.csv", std::ios::binary);
    if (!csv) {
      std::cerr << "cannot write " << (out / "timeseries.csv") << '\n';
      return kExitIo;
    }
    fairmab::write_timeseries_csv(csv, result);
  }
  {
    std::ofstream json(out / "summary.json", std::ios::binary);
    if (!json) return kExitIo;
    json << fairmab::summary_json(result);
  }
  {
    std::ofstream resolved(out / "resolved_config.json", std::ios::binary);
    if (!resolved) return kExitIo;
    resolved << config.resolved_text();
  }
  std::cout << "wrote " << (out / "timeseries.csv").string() << ", "
            << (out / "summary.json").string() << ", "
            << (out / "resolved_config.json").string() << '\n';
  return kExitOk;
}

int cmd_oracle(const std::string& path) {
  const auto config = fairmab::parse_config_file(path);
  if (!config.merit_ok()) {
    std::cerr << "constraint: merit: " << config.merit_error << '\n';
    return kExitConstraint;
  }
  const auto errors = fairmab::validate_run_config(config.run);
  if (!errors.empty()) {
    for (const auto& e : errors) std::cerr << "constraint: " << e << '\n';
    return kExitConstraint;
  }
  if (config.run.instance.regenerate_per_run) {
    std::cerr << "oracle needs a fixed instance "
                 "(set instance.regenerate_per_run = false)\n";
    return kExitConstraint;
  }
  const auto instance = fairmab::instance_for_run(config.run, 0);
  const auto oracle = fairmab::build_oracle(instance, config.run.merit);
  fairmab::RngStream l1_rng(config.run.seed, 0, fairmab::StreamPurpose::aux);
  const double l1 =
      fairmab::estimate_L1(config.run.merit, instance, l1_rng);
  const auto params = fairmab::make_bound_parameters(
      oracle, config.run.merit, instance, config.run.beta, config.run.delta,
      l1);
  std::cout << fairmab::oracle_text(oracle, params, config.run.beta,
                                    config.run.horizon);
  if (!(oracle.delta_min > 0.0))
    std::cout << "note: theoretical bound unavailable: no sub-optimal group\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group-fair multi-armed bandit simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate =
      app.add_subcommand("validate", "check a config against every constraint");
  validate->add_option("config", validate_path, "experiment config (JSON)")
      ->required();

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run the experiment and write artifacts");
  run->add_option("config", run_flags.config_path, "experiment config (JSON)")
      ->required();
  run->add_option("-o,--out", run_flags.out_dir, "output directory");
  run->add_option("--horizon", run_flags.horizon, "override horizon T");
  run->add_option("--runs", run_flags.runs, "override run count");
  run->add_option("--seed", run_flags.seed, "override base seed");
  run->add_option("--algos", run_flags.algos,
                  "override algorithm list (comma separated)");
  run->add_option("--workers", run_flags.workers,
                  "worker threads (default: FAIRMAB_WORKERS or hardware)");

  std::string oracle_path;
  auto* oracle = app.add_subcommand("oracle", "print the instance ground truth");
  oracle->add_option("config", oracle_path, "experiment config (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(validate_path);
    if (run->parsed()) return cmd_run(run_flags);
    if (oracle->parsed()) return cmd_oracle(oracle_path);
  } catch (const fairmab::ConfigParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConstraint;
  }
  return kExitOk;
}
