#include "cli/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "unigen/error.hpp"
#include "unigen/genome.hpp"
#include "unigen/tasks.hpp"
#include "unigen/version.hpp"

namespace unigen::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError("config key '" + key + "' needs a non-negative integer, got '" + value + "'");
  }
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    throw FormatError("config key '" + key + "' is out of range");
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    return csv::parse_double(value);
  } catch (const FormatError&) {
    throw FormatError("config key '" + key + "' needs a number, got '" + value + "'");
  }
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(number) + ": expected 'key = value'");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_key_values(const std::map<std::string, std::string>& values, ExperimentConfig& cfg) {
  for (const auto& [key, value] : values) {
    if (key == "task") cfg.task = value;
    else if (key == "npop") cfg.npop = to_unsigned(key, value);
    else if (key == "depth") cfg.depth = static_cast<int>(to_unsigned(key, value));
    else if (key == "half_range") cfg.half_range = to_double(key, value);
    else if (key == "threshold") cfg.threshold = to_double(key, value);
    else if (key == "mutation") cfg.mutation = to_double(key, value);
    else if (key == "elitism") cfg.elitism = to_unsigned(key, value);
    else if (key == "max_gen") cfg.max_gen = to_unsigned(key, value);
    else if (key == "seeds") cfg.seeds = to_unsigned(key, value);
    else if (key == "base_seed") cfg.base_seed = to_unsigned(key, value);
    else if (key == "out") cfg.out = value;
    else if (key == "workers") cfg.workers = to_unsigned(key, value);
    else if (key == "horizon") cfg.horizon = to_unsigned(key, value);
    else if (key == "bins") cfg.bins = to_unsigned(key, value);
    else if (key == "alpha_max_error") cfg.alpha_max_error = to_double(key, value);
    else throw FormatError("unknown config key '" + key + "'");
  }
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  apply_key_values(parse_key_values(text.str()), cfg);
}

ga::GAConfig to_ga_config(const ExperimentConfig& cfg) {
  if (!cfg.threshold) {
    throw FormatError("the termination threshold h is required (--threshold or 'threshold = ...')");
  }
  ga::GAConfig out;
  out.population_size = cfg.npop;
  out.threshold = *cfg.threshold;
  out.mutation_rate = cfg.mutation;
  out.elitism = cfg.elitism;
  out.max_generations = cfg.max_gen;
  out.codec.depth = cfg.depth;
  out.codec.half_range = cfg.half_range;
  try {
    out.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return out;
}

csv::Metadata result_metadata(const ExperimentConfig& cfg) {
  csv::Metadata meta;
  meta.add("generator", std::string("unigen ") + kVersion)
      .add("task", cfg.task)
      .add("slot_convention", tasks::kSlotConvention)
      .add("npop", std::to_string(cfg.npop))
      .add("depth", std::to_string(cfg.depth))
      .add("half_range", cfg.half_range)
      .add("threshold", cfg.threshold ? csv::format_double(*cfg.threshold) : "unset")
      .add("mutation", cfg.mutation)
      .add("elitism", std::to_string(cfg.elitism))
      .add("max_gen", std::to_string(cfg.max_gen))
      .add("crossover", ga::to_string(ga::CrossoverMode::kTwoPointSegment))
      .add("seeds", std::to_string(cfg.seeds))
      .add("base_seed", std::to_string(cfg.base_seed))
      .add("seed_rule", "run i uses base_seed + i; streams splitmix64(seed ^ fnv1a64(label))")
      .add("rng", "mt19937_64")
      .add("horizon", std::to_string(cfg.horizon))
      .add("bins", std::to_string(cfg.bins))
      .add("binning", "equal-count epsilon quantiles of converged runs")
      .add("alpha_max_error", cfg.alpha_max_error);
  return meta;
}

std::string echo_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "task = " << cfg.task << '\n'
      << "npop = " << cfg.npop << '\n'
      << "depth = " << cfg.depth << '\n'
      << "half_range = " << csv::format_double(cfg.half_range) << '\n'
      << (cfg.threshold ? "threshold = " + csv::format_double(*cfg.threshold) : "# threshold unset")
      << '\n'
      << "mutation = " << csv::format_double(cfg.mutation) << '\n'
      << "elitism = " << cfg.elitism << '\n'
      << "max_gen = " << cfg.max_gen << '\n'
      << "seeds = " << cfg.seeds << '\n'
      << "base_seed = " << cfg.base_seed << '\n'
      << "out = " << cfg.out << '\n'
      << "workers = " << cfg.workers << '\n'
      << "horizon = " << cfg.horizon << '\n'
      << "bins = " << cfg.bins << '\n'
      << "alpha_max_error = " << csv::format_double(cfg.alpha_max_error) << '\n';
  return out.str();
}

}  // namespace unigen::cli
