#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unigen/genome.hpp"
#include "unigen/random.hpp"
#include "unigen/tasks.hpp"

namespace unigen::ga {

using genome::Genome;

enum class CrossoverMode { kTwoPointSegment };
enum class TerminationReason { kConverged, kGenerationCap };

const char* to_string(CrossoverMode mode);
const char* to_string(TerminationReason reason);

struct GAConfig {
  std::size_t population_size = 100;  // N_pop
  double threshold = 0.0;              // h; no default, must be set > 0
  double mutation_rate = 0.0;          // per-bit flip probability
  CrossoverMode crossover = CrossoverMode::kTwoPointSegment;
  std::size_t elitism = 0;
  std::size_t max_generations = 500;
  genome::CodecConfig codec;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct Individual {
  Genome genome;
  double fitness = 0.0;
  bool evaluated = false;
};

struct Population {
  std::vector<Individual> individuals;

  [[nodiscard]] std::size_t size() const noexcept { return individuals.size(); }
  [[nodiscard]] const Individual& best() const { return individuals.front(); }
};

/// Genome -> mean fidelity on a task. Immutable after construction.
class FitnessFunction {
 public:
  FitnessFunction(tasks::TaskSpec task, const genome::CodecConfig& codec);
  double operator()(const Genome& g) const;

  [[nodiscard]] const tasks::TaskSpec& task() const noexcept { return task_; }
  [[nodiscard]] const tasks::UnitaryBuilder& builder() const noexcept { return builder_; }

 private:
  tasks::TaskSpec task_;
  tasks::UnitaryBuilder builder_;
};

/// Scores every individual without a cached fitness, then sorts descending
/// (stable, so ties keep their previous order).
Population evaluate(Population pop, const FitnessFunction& fitness);

/// Rank-exponential law P(n) ~ exp(-ln(N) (n-1)/(N-1)), normalised, n = 1..N.
/// The last entry is set to P(1)/N so that identity holds bit-exactly.
std::vector<double> selection_probabilities(std::size_t population_size);

/// Inverse-CDF draw from `probs` using one uniform variate.
std::size_t sample_rank(std::span<const double> probs, Rng& rng);

/// Two distinct ranks; the second is redrawn until it differs from the first.
std::pair<std::size_t, std::size_t> select_pair(std::span<const double> probs, Rng& rng);

/// Exchanges genes [first, last] (1-based, inclusive) between a and b.
void swap_segment(genome::Chromosome& a, genome::Chromosome& b, std::size_t first, std::size_t last);

/// Uniform draw over ordered cut pairs 1 <= s <= e <= L.
std::pair<std::size_t, std::size_t> draw_segment(std::size_t length, Rng& rng);

/// Every chromosome position (slot j, generator k) exchanges an independent
/// random segment. Throws std::invalid_argument on shape mismatch.
std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng);

Genome mutate(Genome g, double rate, Rng& rng);

struct RunStreams {
  explicit RunStreams(std::uint64_t run_seed);
  Rng init;
  Rng selection;
  Rng crossover;
  Rng mutation;
};

Population random_population(const GAConfig& cfg, std::size_t slots, Rng& rng);

/// Elites copied unchanged, the rest bred by select_pair -> crossover ->
/// mutate; the result is evaluated and sorted.
Population next_generation(const Population& pop, const GAConfig& cfg,
                           const FitnessFunction& fitness, RunStreams& streams);

double mean_fitness(const Population& pop);
/// Population standard deviation of the fitness values.
double fitness_fluctuation(const Population& pop);

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<double> mean_fitness;
  std::vector<double> fluctuation;
  std::vector<double> best_fitness;
  std::size_t generations = 0;  // Q_c
  TerminationReason termination = TerminationReason::kGenerationCap;
  Genome best_genome;
  double best_final_fitness = 0.0;  // xi_opt
  double epsilon_opt = 1.0;         // 1 - xi_opt
  GAConfig config;
  std::string task_name;

  [[nodiscard]] bool converged() const noexcept {
    return termination == TerminationReason::kConverged;
  }
};

/// Full GA run. Pure function of (cfg, task, seed).
RunRecord run(const GAConfig& cfg, const tasks::TaskSpec& task, std::uint64_t seed);

/// Per-generation rows (run_id, seed, generation, mean_fitness, fluctuation,
/// best_fitness) with their header.
void write_generation_rows(std::ostream& out, const RunRecord& record, std::size_t run_id,
                           bool with_header);
/// Summary rows (run_id, seed, q_c, epsilon_opt, termination_reason, best_genome).
void write_summary_rows(std::ostream& out, const RunRecord& record, std::size_t run_id,
                        bool with_header);
/// Generation table, a blank line, then the summary table.
void write_run_csv(std::ostream& out, const RunRecord& record, std::size_t run_id);

}  // namespace unigen::ga
