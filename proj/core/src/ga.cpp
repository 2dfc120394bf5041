#include "unigen/ga.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "unigen/csv.hpp"
#include "unigen/error.hpp"

namespace unigen::ga {

const char* to_string(CrossoverMode mode) {
  switch (mode) {
    case CrossoverMode::kTwoPointSegment: return "two-point-segment";
  }
  return "unknown";
}

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kConverged: return "converged";
    case TerminationReason::kGenerationCap: return "generation-cap";
  }
  return "unknown";
}

void GAConfig::validate() const {
  if (population_size < 2) throw std::invalid_argument("population size must be >= 2");
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw std::invalid_argument("termination threshold h must be a positive number");
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw std::invalid_argument("mutation rate must lie in [0, 1]");
  }
  if (elitism > population_size) throw std::invalid_argument("elitism cannot exceed population size");
  if (max_generations < 1) throw std::invalid_argument("max_generations must be >= 1");
  codec.validate();
}

FitnessFunction::FitnessFunction(tasks::TaskSpec task, const genome::CodecConfig& codec)
    : task_(std::move(task)), builder_(codec) {
  task_.validate();
  if (task_.circuit.dim != codec.dim) {
    throw std::invalid_argument("codec dimension does not match the task dimension");
  }
}

double FitnessFunction::operator()(const Genome& g) const {
  const auto unitaries = builder_.build(g);
  return tasks::mean_fidelity(task_, unitaries);
}

Population evaluate(Population pop, const FitnessFunction& fitness) {
  for (auto& ind : pop.individuals) {
    if (!ind.evaluated) {
      ind.fitness = fitness(ind.genome);
      ind.evaluated = true;
    }
  }
  std::stable_sort(pop.individuals.begin(), pop.individuals.end(),
                   [](const Individual& a, const Individual& b) { return a.fitness > b.fitness; });
  return pop;
}

std::vector<double> selection_probabilities(std::size_t population_size) {
  if (population_size < 2) {
    throw std::invalid_argument("selection probabilities need a population of at least 2");
  }
  const auto n = static_cast<double>(population_size);
  const double rate = std::log(n) / (n - 1.0);
  std::vector<double> weights(population_size);
  double total = 0.0;
  for (std::size_t i = 0; i < population_size; ++i) {
    weights[i] = (i + 1 == population_size) ? 1.0 / n : std::exp(-rate * static_cast<double>(i));
    total += weights[i];
  }
  for (auto& w : weights) w /= total;
  // nudge P(1) by an ulp or two until P(N) = P(1)/N and P(N)*N = P(1) both hold
  double first = weights.front();
  double last = first / n;
  for (int i = 0; i < 16 && last * n != first; ++i) {
    first = last * n;
    last = first / n;
  }
  weights.front() = first;
  weights.back() = last;
  return weights;
}

std::size_t sample_rank(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform01();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return probs.size() - 1;  // u landed in the rounding slack at the top
}

std::pair<std::size_t, std::size_t> select_pair(std::span<const double> probs, Rng& rng) {
  if (probs.size() < 2) throw std::invalid_argument("select_pair needs at least two individuals");
  const std::size_t first = sample_rank(probs, rng);
  std::size_t second = sample_rank(probs, rng);
  while (second == first) second = sample_rank(probs, rng);
  return {first, second};
}

void swap_segment(genome::Chromosome& a, genome::Chromosome& b, std::size_t first, std::size_t last) {
  if (a.size() != b.size()) throw std::invalid_argument("chromosome lengths differ");
  if (first < 1 || first > last || last > a.size()) {
    throw std::invalid_argument("segment must satisfy 1 <= first <= last <= L");
  }
  auto& ga = a.mutable_genes();
  auto& gb = b.mutable_genes();
  std::swap_ranges(ga.begin() + static_cast<std::ptrdiff_t>(first - 1),
                   ga.begin() + static_cast<std::ptrdiff_t>(last), gb.begin() + static_cast<std::ptrdiff_t>(first - 1));
}

std::pair<std::size_t, std::size_t> draw_segment(std::size_t length, Rng& rng) {
  // index enumerates (s, e) with s ascending, then e ascending
  std::uint64_t index = rng.below(length * (length + 1) / 2);
  for (std::size_t s = 1; s <= length; ++s) {
    const std::size_t count = length - s + 1;
    if (index < count) return {s, s + static_cast<std::size_t>(index)};
    index -= count;
  }
  return {length, length};
}

std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng) {
  if (!a.same_shape(b)) throw std::invalid_argument("crossover parents have different shapes");
  std::pair<Genome, Genome> children{a, b};
  for (std::size_t j = 0; j < a.vectors.size(); ++j) {
    auto& left = children.first.vectors[j].chromosomes;
    auto& right = children.second.vectors[j].chromosomes;
    for (std::size_t k = 0; k < left.size(); ++k) {
      const auto [s, e] = draw_segment(left[k].size(), rng);
      swap_segment(left[k], right[k], s, e);
    }
  }
  return children;
}

Genome mutate(Genome g, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("mutation rate must lie in [0, 1]");
  if (rate == 0.0) return g;
  for (auto& v : g.vectors) {
    for (auto& c : v.chromosomes) {
      for (auto& gene : c.mutable_genes()) {
        if (rng.bernoulli(rate)) gene ^= 1U;
      }
    }
  }
  return g;
}

RunStreams::RunStreams(std::uint64_t run_seed)
    : init(derive_seed(run_seed, StreamLabel::kInit)),
      selection(derive_seed(run_seed, StreamLabel::kSelection)),
      crossover(derive_seed(run_seed, StreamLabel::kCrossover)),
      mutation(derive_seed(run_seed, StreamLabel::kMutation)) {}

Population random_population(const GAConfig& cfg, std::size_t slots, Rng& rng) {
  Population pop;
  pop.individuals.reserve(cfg.population_size);
  for (std::size_t n = 0; n < cfg.population_size; ++n) {
    pop.individuals.push_back({genome::random_genome(rng, cfg.codec, slots), 0.0, false});
  }
  return pop;
}

Population next_generation(const Population& pop, const GAConfig& cfg,
                           const FitnessFunction& fitness, RunStreams& streams) {
  const std::size_t target = cfg.population_size;
  if (pop.size() != target) throw std::invalid_argument("population size does not match config");
  const auto probs = selection_probabilities(target);

  Population next;
  next.individuals.reserve(target + 1);
  for (std::size_t n = 0; n < cfg.elitism; ++n) next.individuals.push_back(pop.individuals[n]);

  while (next.size() < target) {
    const auto [n1, n2] = select_pair(probs, streams.selection);
    auto [child1, child2] =
        crossover(pop.individuals[n1].genome, pop.individuals[n2].genome, streams.crossover);
    child1 = mutate(std::move(child1), cfg.mutation_rate, streams.mutation);
    child2 = mutate(std::move(child2), cfg.mutation_rate, streams.mutation);
    next.individuals.push_back({std::move(child1), 0.0, false});
    if (next.size() < target) next.individuals.push_back({std::move(child2), 0.0, false});
  }
  return evaluate(std::move(next), fitness);
}

double mean_fitness(const Population& pop) {
  double sum = 0.0;
  for (const auto& ind : pop.individuals) sum += ind.fitness;
  return sum / static_cast<double>(pop.size());
}

double fitness_fluctuation(const Population& pop) {
  // population form, accumulated relative to the first value so an all-equal
  // population gives exactly 0
  const double shift = pop.individuals.front().fitness;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& ind : pop.individuals) {
    const double x = ind.fitness - shift;
    sum += x;
    sum_sq += x * x;
  }
  const auto n = static_cast<double>(pop.size());
  const double radicand = sum_sq / n - (sum / n) * (sum / n);
  if (radicand < -1e-15) throw NumericFailure("fitness fluctuation: negative variance");
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

RunRecord run(const GAConfig& cfg, const tasks::TaskSpec& task, std::uint64_t seed) {
  cfg.validate();
  const FitnessFunction fitness(task, cfg.codec);
  const std::size_t slots = task.circuit.trainable_count();

  RunStreams streams(seed);
  RunRecord record;
  record.seed = seed;
  record.config = cfg;
  record.task_name = task.name;

  Population pop = evaluate(random_population(cfg, slots, streams.init), fitness);
  for (std::size_t generation = 1;; ++generation) {
    const double fluctuation = fitness_fluctuation(pop);
    record.mean_fitness.push_back(mean_fitness(pop));
    record.fluctuation.push_back(fluctuation);
    record.best_fitness.push_back(pop.best().fitness);

    const bool converged = fluctuation < cfg.threshold;
    if (converged || generation >= cfg.max_generations) {
      record.generations = generation;
      record.termination =
          converged ? TerminationReason::kConverged : TerminationReason::kGenerationCap;
      break;
    }
    pop = next_generation(pop, cfg, fitness, streams);
  }

  record.best_genome = pop.best().genome;
  record.best_final_fitness = pop.best().fitness;
  record.epsilon_opt = std::clamp(1.0 - record.best_final_fitness, 0.0, 1.0);
  return record;
}

void write_generation_rows(std::ostream& out, const RunRecord& record, std::size_t run_id,
                           bool with_header) {
  if (with_header) out << "run_id,seed,generation,mean_fitness,fluctuation,best_fitness\n";
  for (std::size_t g = 0; g < record.generations; ++g) {
    out << run_id << ',' << record.seed << ',' << (g + 1) << ','
        << csv::format_double(record.mean_fitness[g]) << ','
        << csv::format_double(record.fluctuation[g]) << ','
        << csv::format_double(record.best_fitness[g]) << '\n';
  }
}

void write_summary_rows(std::ostream& out, const RunRecord& record, std::size_t run_id,
                        bool with_header) {
  if (with_header) out << "run_id,seed,q_c,epsilon_opt,best_fitness,termination_reason,best_genome\n";
  out << run_id << ',' << record.seed << ',' << record.generations << ','
      << csv::format_double(record.epsilon_opt) << ','
      << csv::format_double(record.best_final_fitness) << ',' << to_string(record.termination)
      << ',' << genome::to_string(record.best_genome) << '\n';
}

void write_run_csv(std::ostream& out, const RunRecord& record, std::size_t run_id) {
  write_generation_rows(out, record, run_id, true);
  out << '\n';
  write_summary_rows(out, record, run_id, true);
}

}  // namespace unigen::ga
