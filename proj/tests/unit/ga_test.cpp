#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "unigen/error.hpp"
#include "unigen/ga.hpp"
#include "unigen/tasks.hpp"

namespace {

using namespace unigen;
using namespace unigen::ga;

GAConfig small_config(std::size_t npop, double h) {
  GAConfig cfg;
  cfg.population_size = npop;
  cfg.threshold = h;
  cfg.max_generations = 200;
  return cfg;
}

Population with_fitness(std::vector<double> values) {
  Population pop;
  for (const double v : values) pop.individuals.push_back({{}, v, true});
  return pop;
}

TEST(Selection, TwoIndividuals) {
  const auto p = selection_probabilities(2);
  EXPECT_DOUBLE_EQ(p[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(p[1], 1.0 / 3.0);
}

TEST(Selection, LastRankIdentityIsExact) {
  for (std::size_t n = 2; n <= 400; ++n) {
    const auto p = selection_probabilities(n);
    ASSERT_EQ(p.size(), n);
    EXPECT_EQ(p.back() * static_cast<double>(n), p.front()) << "N=" << n;
    EXPECT_EQ(p.back(), p.front() / static_cast<double>(n)) << "N=" << n;
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    for (std::size_t i = 1; i < n; ++i) ASSERT_LT(p[i], p[i - 1]);
  }
  EXPECT_THROW(selection_probabilities(1), std::invalid_argument);
}

TEST(Selection, HistogramMatchesLaw) {
  // chi-square below its 1e-6 tail and every rank within a Bonferroni-sized 5 sigma
  for (std::size_t n : {10u, 100u}) {
    const auto p = selection_probabilities(n);
    Rng rng(1234 + n);
    std::vector<int> counts(n);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[sample_rank(p, rng)];
    double chi2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double expected = draws * p[r];
      const double sigma = std::sqrt(draws * p[r] * (1.0 - p[r]));
      EXPECT_LE(std::abs(counts[r] - expected), 5.0 * sigma) << "N=" << n << " rank=" << r;
      chi2 += (counts[r] - expected) * (counts[r] - expected) / expected;
    }
    const double dof = static_cast<double>(n - 1);
    EXPECT_LE(chi2, dof + 7.0 * std::sqrt(2.0 * dof)) << "N=" << n;
  }
}

TEST(Selection, ThreeSigmaExcursionRateIsCalibrated) {
  // fraction of ranks outside 3 sigma should be near 0.27% for a correct sampler
  const std::size_t n = 100;
  const auto p = selection_probabilities(n);
  std::size_t outside = 0;
  const int repeats = 40;
  for (int s = 0; s < repeats; ++s) {
    Rng rng(50000 + s);
    std::vector<int> counts(n);
    for (int i = 0; i < 100000; ++i) ++counts[sample_rank(p, rng)];
    for (std::size_t r = 0; r < n; ++r) {
      const double sigma = std::sqrt(1e5 * p[r] * (1.0 - p[r]));
      outside += std::abs(counts[r] - 1e5 * p[r]) > 3.0 * sigma;
    }
  }
  // 4000 rank tests, expected about 11 excursions
  EXPECT_LE(outside, 30u);
}

TEST(Selection, PairIsDistinct) {
  const auto two = selection_probabilities(2);
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b] = select_pair(two, rng);
    EXPECT_EQ(a + b, 1u);
  }
  const auto hundred = selection_probabilities(100);
  for (int i = 0; i < 10000; ++i) {
    const auto [a, b] = select_pair(hundred, rng);
    EXPECT_NE(a, b);
    EXPECT_LT(a, 100u);
    EXPECT_LT(b, 100u);
  }
}

TEST(Crossover, SegmentSwapExample) {
  auto a = genome::Chromosome::from_string("11101");
  auto b = genome::Chromosome::from_string("10011");
  swap_segment(a, b, 2, 4);
  EXPECT_EQ(a.to_string(), "10011");
  EXPECT_EQ(b.to_string(), "11101");
  auto c = genome::Chromosome::from_string("11100");
  auto d = genome::Chromosome::from_string("00011");
  swap_segment(c, d, 1, 2);
  EXPECT_EQ(c.to_string(), "00100");
  EXPECT_EQ(d.to_string(), "11011");
  EXPECT_THROW(swap_segment(c, d, 0, 2), std::invalid_argument);
  EXPECT_THROW(swap_segment(c, d, 3, 2), std::invalid_argument);
  EXPECT_THROW(swap_segment(c, d, 1, 6), std::invalid_argument);
}

TEST(Crossover, SegmentDrawIsUniformOverOrderedPairs) {
  Rng rng(10);
  const std::size_t length = 4;  // 10 ordered pairs
  std::vector<std::vector<int>> counts(length + 1, std::vector<int>(length + 1));
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto [s, e] = draw_segment(length, rng);
    ASSERT_GE(s, 1u);
    ASSERT_LE(s, e);
    ASSERT_LE(e, length);
    ++counts[s][e];
  }
  const double sigma = std::sqrt(draws * 0.1 * 0.9);
  for (std::size_t s = 1; s <= length; ++s) {
    for (std::size_t e = s; e <= length; ++e) EXPECT_NEAR(counts[s][e], draws / 10.0, 4 * sigma);
  }
}

TEST(Crossover, ConservesBitsPerPosition) {
  const genome::CodecConfig codec{.depth = 15};
  Rng rng(77);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto a = genome::random_genome(rng, codec, 2);
    const auto b = genome::random_genome(rng, codec, 2);
    const auto [c, d] = crossover(a, b, rng);
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t l = 0; l < 15; ++l) {
          ASSERT_EQ(a.vectors[j].chromosomes[k][l] + b.vectors[j].chromosomes[k][l],
                    c.vectors[j].chromosomes[k][l] + d.vectors[j].chromosomes[k][l]);
        }
      }
    }
  }
}

TEST(Crossover, IdenticalParentsAndShapeMismatch) {
  const genome::CodecConfig codec{.depth = 9};
  Rng rng(4);
  const auto a = genome::random_genome(rng, codec, 2);
  const auto [c, d] = crossover(a, a, rng);
  EXPECT_EQ(c, a);
  EXPECT_EQ(d, a);
  EXPECT_THROW(crossover(a, genome::random_genome(rng, codec, 1), rng), std::invalid_argument);
}

TEST(Mutation, Rates) {
  const genome::CodecConfig codec{.depth = 50};
  Rng rng(12);
  const auto g = genome::random_genome(rng, codec, 2);
  EXPECT_EQ(mutate(g, 0.0, rng), g);
  const auto flipped = mutate(g, 1.0, rng);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(flipped.vectors[j].chromosomes[k], g.vectors[j].chromosomes[k].complement());
    }
  }
  std::size_t changed = 0;
  std::size_t total = 0;
  while (total < 1000000) {
    const auto m = mutate(g, 0.01, rng);
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t l = 0; l < 50; ++l) {
          changed += m.vectors[j].chromosomes[k][l] != g.vectors[j].chromosomes[k][l];
        }
      }
    }
    total += 300;
  }
  const double rate = static_cast<double>(changed) / static_cast<double>(total);
  EXPECT_GE(rate, 0.008);
  EXPECT_LE(rate, 0.012);
  EXPECT_THROW(mutate(g, 1.5, rng), std::invalid_argument);
}

TEST(Fluctuation, Examples) {
  EXPECT_EQ(fitness_fluctuation(with_fitness({0.3, 0.3, 0.3})), 0.0);
  EXPECT_EQ(fitness_fluctuation(with_fitness({0.0, 1.0})), 0.5);
  EXPECT_DOUBLE_EQ(mean_fitness(with_fitness({0.0, 1.0})), 0.5);
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(10);
    for (auto& x : v) x = rng.bit() ? 1.0 : rng.uniform01();
    EXPECT_LE(fitness_fluctuation(with_fitness(v)), 0.5);
  }
}

TEST(Generation, ElitismKeepsWholePopulation) {
  const auto task = tasks::deutsch_task();
  auto cfg = small_config(20, 1e-4);
  cfg.elitism = 20;
  const FitnessFunction fitness(task, cfg.codec);
  RunStreams streams(5);
  const auto pop = evaluate(random_population(cfg, 2, streams.init), fitness);
  const auto next = next_generation(pop, cfg, fitness, streams);
  ASSERT_EQ(next.size(), pop.size());
  for (std::size_t n = 0; n < pop.size(); ++n) EXPECT_EQ(next.individuals[n].genome, pop.individuals[n].genome);
}

TEST(Generation, HomogeneousPopulationIsFixed) {
  const auto task = tasks::deutsch_task();
  auto cfg = small_config(11, 1e-4);
  const FitnessFunction fitness(task, cfg.codec);
  RunStreams streams(9);
  const auto g = genome::random_genome(streams.init, cfg.codec, 2);
  Population pop;
  for (std::size_t n = 0; n < 11; ++n) pop.individuals.push_back({g, 0.0, false});
  pop = evaluate(pop, fitness);
  const auto next = next_generation(pop, cfg, fitness, streams);
  ASSERT_EQ(next.size(), 11u);
  for (const auto& ind : next.individuals) {
    EXPECT_EQ(ind.genome, g);
    EXPECT_EQ(ind.fitness, pop.best().fitness);
  }
}

TEST(Generation, OddPopulationSizeIsKept) {
  const auto task = tasks::deutsch_task();
  auto cfg = small_config(7, 1e-4);
  cfg.elitism = 2;
  cfg.mutation_rate = 0.05;
  const FitnessFunction fitness(task, cfg.codec);
  RunStreams streams(1);
  auto pop = evaluate(random_population(cfg, 2, streams.init), fitness);
  for (int g = 0; g < 5; ++g) {
    const double best = pop.best().fitness;
    pop = next_generation(pop, cfg, fitness, streams);
    ASSERT_EQ(pop.size(), 7u);
    EXPECT_GE(pop.best().fitness, best);
    for (std::size_t n = 1; n < pop.size(); ++n) {
      EXPECT_GE(pop.individuals[n - 1].fitness, pop.individuals[n].fitness);
    }
  }
}

TEST(Run, ThresholdOneStopsImmediately) {
  const auto record = run(small_config(10, 1.0), tasks::deutsch_task(), 3);
  EXPECT_EQ(record.generations, 1u);
  EXPECT_TRUE(record.converged());
  EXPECT_EQ(record.mean_fitness.size(), 1u);
}

TEST(Run, DeterministicPerSeed) {
  const auto cfg = small_config(30, 1e-3);
  const auto task = tasks::deutsch_task();
  const auto a = run(cfg, task, 17);
  const auto b = run(cfg, task, 17);
  EXPECT_EQ(a.mean_fitness, b.mean_fitness);
  EXPECT_EQ(a.fluctuation, b.fluctuation);
  EXPECT_EQ(a.best_genome, b.best_genome);
  EXPECT_EQ(a.generations, b.generations);
  const auto c = run(cfg, task, 18);
  EXPECT_NE(a.mean_fitness, c.mean_fitness);
}

TEST(Run, CapIsAResult) {
  auto cfg = small_config(10, 1e-300);
  cfg.max_generations = 3;
  cfg.mutation_rate = 0.5;
  const auto record = run(cfg, tasks::deutsch_task(), 1);
  EXPECT_EQ(record.generations, 3u);
  EXPECT_EQ(record.termination, TerminationReason::kGenerationCap);
  EXPECT_DOUBLE_EQ(record.epsilon_opt, 1.0 - record.best_final_fitness);
}

TEST(Run, ElitismMakesBestMonotone) {
  auto cfg = small_config(40, 1e-6);
  cfg.elitism = 1;
  cfg.mutation_rate = 0.01;
  cfg.max_generations = 60;
  const auto record = run(cfg, tasks::deutsch_task(), 21);
  for (std::size_t g = 1; g < record.best_fitness.size(); ++g) {
    EXPECT_GE(record.best_fitness[g], record.best_fitness[g - 1]);
  }
}

TEST(Run, TypicalDeutschRunConvergesQuickly) {
  const auto task = tasks::deutsch_task();
  const auto cfg = small_config(100, 1e-4);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto record = run(cfg, task, seed);
    EXPECT_TRUE(record.converged());
    EXPECT_LE(record.generations, 60u);
    EXPECT_LT(record.epsilon_opt, 0.01);
  }
}

TEST(Config, Validation) {
  GAConfig cfg;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);  // h unset
  cfg.threshold = 1e-3;
  cfg.validate();
  cfg.elitism = 101;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.elitism = 0;
  cfg.population_size = 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.population_size = 10;
  cfg.mutation_rate = -0.1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
