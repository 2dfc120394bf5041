#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "unigen/error.hpp"
#include "unigen/version.hpp"

namespace {

using unigen::cli::ExperimentConfig;

struct ExperimentFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
};

// Flags are collected as strings and applied through the same parser as
// config files, after the file, so they take precedence.
void add_experiment_flags(CLI::App& app, ExperimentFlags& flags) {
  app.add_option("--config", flags.config_file, "key = value config file");
  const std::pair<const char*, const char*> options[] = {
      {"--task", "task"},           {"--npop", "npop"},
      {"--depth", "depth"},         {"--half-range", "half_range"},
      {"--threshold", "threshold"}, {"--mutation", "mutation"},
      {"--elitism", "elitism"},     {"--max-gen", "max_gen"},
      {"--seeds", "seeds"},         {"--base-seed", "base_seed"},
      {"--out", "out"},             {"--workers", "workers"},
      {"--horizon", "horizon"},     {"--bins", "bins"},
      {"--alpha-max-error", "alpha_max_error"},
  };
  for (const auto& [flag, key] : options) {
    app.add_option_function<std::string>(
        flag, [&flags, key = std::string(key)](const std::string& v) { flags.values[key] = v; },
        key);
  }
}

ExperimentConfig resolve(ExperimentConfig base, const ExperimentFlags& flags) {
  if (!flags.config_file.empty()) unigen::cli::load_config_file(flags.config_file, base);
  unigen::cli::apply_key_values(flags.values, base);
  return base;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genetic-algorithm search for the internal unitaries of a quantum computation"};
  app.set_version_flag("--version", std::string("unigen ") + unigen::kVersion);
  app.require_subcommand(1);

  ExperimentFlags run_flags, sweep_flags, repro_flags;
  auto* run = app.add_subcommand("run", "single GA run");
  add_experiment_flags(*run, run_flags);
  auto* sweep = app.add_subcommand("sweep", "ensemble of seeded runs with aggregate statistics");
  add_experiment_flags(*sweep, sweep_flags);

  unigen::cli::FitCommand fit_cmd;
  auto* fit = app.add_subcommand("fit", "fit q_c = a exp(-b eps) + c");
  fit->add_option("--input", fit_cmd.input, "epsilon,q_c CSV or a sweep runs.csv")->required();
  fit->add_option("--out", fit_cmd.output, "output fit CSV")->required();
  fit->add_option("--bins", fit_cmd.bins, "quantile bins when reading run summaries");

  std::string figure;
  auto* repro = app.add_subcommand("reproduce", "regenerate figure data (fig5, fig6, fig7)");
  repro->add_option("figure", figure, "fig5 | fig6 | fig7")->required();
  add_experiment_flags(*repro, repro_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : unigen::cli::kExitError;
  }

  try {
    if (*run) return unigen::cli::cmd_run(resolve({}, run_flags), std::cerr);
    if (*sweep) return unigen::cli::cmd_sweep(resolve({}, sweep_flags), std::cerr);
    if (*fit) return unigen::cli::cmd_fit(fit_cmd, std::cerr);
    if (*repro) {
      return unigen::cli::cmd_reproduce(
          figure, resolve(unigen::cli::reproduce_defaults(), repro_flags), std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "unigen: " << e.what() << '\n';
    return unigen::cli::kExitError;
  }
  return unigen::cli::kExitError;
}
