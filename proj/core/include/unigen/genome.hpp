#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "unigen/linalg.hpp"
#include "unigen/random.hpp"

namespace unigen::genome {

/// Binary codec for one real parameter.
///
/// A chromosome g_1..g_L maps to R * sum_l (-1)^(g_l xor 1) / 2^l: 2^L values
/// symmetric about zero with spacing R * 2^(1-L). g_1 is the most significant
/// gene. R defaults to pi; set it to 2*pi for the literal prefactor variant.
struct CodecConfig {
  int depth = 15;                      // L, genes per chromosome
  double half_range = std::numbers::pi;  // R
  std::size_t dim = 2;                 // Hilbert space dimension d

  /// Throws std::invalid_argument unless 1 <= L <= 52, R > 0 and d >= 2.
  void validate() const;
  [[nodiscard]] double spacing() const;  // R * 2^(1-L)
  [[nodiscard]] std::size_t genes_per_vector() const { return linalg::generator_count(dim); }
};

class Chromosome {
 public:
  Chromosome() = default;
  /// Every element must be 0 or 1.
  explicit Chromosome(std::vector<std::uint8_t> genes);
  /// Parses a '0'/'1' string.
  static Chromosome from_string(std::string_view bits);

  [[nodiscard]] std::size_t size() const noexcept { return genes_.size(); }
  [[nodiscard]] std::uint8_t operator[](std::size_t l) const noexcept { return genes_[l]; }
  [[nodiscard]] const std::vector<std::uint8_t>& genes() const noexcept { return genes_; }
  std::vector<std::uint8_t>& mutable_genes() noexcept { return genes_; }

  /// Genes read as an unsigned integer, g_1 most significant.
  [[nodiscard]] std::uint64_t to_integer() const;
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] Chromosome complement() const;

  friend bool operator==(const Chromosome&, const Chromosome&) = default;

 private:
  std::vector<std::uint8_t> genes_;
};

/// d^2 - 1 chromosomes encoding one trainable unitary.
struct GeneticParameterVector {
  std::vector<Chromosome> chromosomes;
  friend bool operator==(const GeneticParameterVector&, const GeneticParameterVector&) = default;
};

/// One genetic parameter vector per trainable slot.
struct Genome {
  std::vector<GeneticParameterVector> vectors;

  [[nodiscard]] std::size_t slot_count() const noexcept { return vectors.size(); }
  /// Throws std::invalid_argument if the genome is not N_u x (d^2-1) x L for cfg.
  void check_shape(const CodecConfig& cfg, std::size_t slots) const;
  [[nodiscard]] bool same_shape(const Genome& other) const;

  friend bool operator==(const Genome&, const Genome&) = default;
};

double decode(const Chromosome& c, const CodecConfig& cfg);
linalg::ParameterVector decode_vector(const GeneticParameterVector& g, const CodecConfig& cfg);
std::vector<linalg::ParameterVector> decode_genome(const Genome& g, const CodecConfig& cfg);

/// Grid chromosome whose decoded value is closest to `value` (clamped to the range).
Chromosome encode_nearest(double value, const CodecConfig& cfg);
GeneticParameterVector encode_nearest(const linalg::ParameterVector& p, const CodecConfig& cfg);

Chromosome random_chromosome(Rng& rng, const CodecConfig& cfg);
Genome random_genome(Rng& rng, const CodecConfig& cfg, std::size_t slots);

/// d^2 * N_u * delta: order-of-magnitude bound on the discretisation error.
double rounding_error_bound(const CodecConfig& cfg, std::size_t slots);

/// Compact text form: chromosomes joined by '/', slots joined by ';'.
std::string to_string(const Genome& g);
Genome genome_from_string(std::string_view text);

}  // namespace unigen::genome
