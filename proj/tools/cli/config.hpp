#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "unigen/csv.hpp"
#include "unigen/ga.hpp"

namespace unigen::cli {

/// Everything a run, sweep or reproduction needs. Keys in config files use
/// the member names below; command-line flags override file values.
struct ExperimentConfig {
  std::string task = "deutsch";
  std::size_t npop = 100;
  int depth = 15;
  double half_range = std::numbers::pi;
  std::optional<double> threshold;
  double mutation = 0.0;
  std::size_t elitism = 0;
  std::size_t max_gen = 500;
  std::size_t seeds = 1;
  std::uint64_t base_seed = 1;
  std::string out = "out";
  std::size_t workers = 1;
  /// Stats horizon in generations; 0 keeps only generations each run reached.
  std::size_t horizon = 0;
  /// Equal-count epsilon bins for the (epsilon_opt, Q_c) fit points.
  std::size_t bins = 20;
  /// Runs with epsilon_opt below this enter the alpha statistics.
  double alpha_max_error = 1e-3;
};

/// Parses "key = value" lines ('#' starts a comment). Throws FormatError.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies parsed keys to `cfg`. Unknown keys and malformed values throw FormatError.
void apply_key_values(const std::map<std::string, std::string>& values, ExperimentConfig& cfg);
void load_config_file(const std::string& path, ExperimentConfig& cfg);

/// Throws FormatError if h is missing or any GA field is out of range.
ga::GAConfig to_ga_config(const ExperimentConfig& cfg);

/// Result-affecting fields plus the code version. The worker count is left
/// out on purpose: it must not change result bytes.
csv::Metadata result_metadata(const ExperimentConfig& cfg);

/// Every field, one "key = value" line each, in the config-file syntax.
std::string echo_config(const ExperimentConfig& cfg);

}  // namespace unigen::cli
