#include "unigen/genome.hpp"

#include <cmath>
#include <stdexcept>

namespace unigen::genome {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

void CodecConfig::validate() const {
  if (depth < 1 || depth > 52) {
    throw std::invalid_argument("codec depth L must be in [1, 52], got " + std::to_string(depth));
  }
  if (!(half_range > 0.0) || !std::isfinite(half_range)) {
    throw std::invalid_argument("codec half-range R must be positive and finite");
  }
  if (dim < 2) throw std::invalid_argument("codec dimension must be >= 2");
}

double CodecConfig::spacing() const { return std::ldexp(half_range, 1 - depth); }

Chromosome::Chromosome(std::vector<std::uint8_t> genes) : genes_(std::move(genes)) {
  for (const auto g : genes_) {
    if (g > 1) throw std::invalid_argument("chromosome genes must be 0 or 1");
  }
}

Chromosome Chromosome::from_string(std::string_view bits) {
  std::vector<std::uint8_t> genes;
  genes.reserve(bits.size());
  for (const char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument("chromosome string may only contain '0' and '1'");
    }
    genes.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return Chromosome(std::move(genes));
}

std::uint64_t Chromosome::to_integer() const {
  if (genes_.size() > 64) throw std::invalid_argument("chromosome too long for integer view");
  std::uint64_t k = 0;
  for (const auto g : genes_) k = (k << 1) | g;
  return k;
}

std::string Chromosome::to_string() const {
  std::string s;
  s.reserve(genes_.size());
  for (const auto g : genes_) s.push_back(static_cast<char>('0' + g));
  return s;
}

Chromosome Chromosome::complement() const {
  Chromosome out = *this;
  for (auto& g : out.genes_) g ^= 1U;
  return out;
}

void Genome::check_shape(const CodecConfig& cfg, std::size_t slots) const {
  if (vectors.size() != slots) {
    throw std::invalid_argument("genome has " + std::to_string(vectors.size()) +
                                " parameter vectors, expected " + std::to_string(slots));
  }
  for (const auto& v : vectors) {
    if (v.chromosomes.size() != cfg.genes_per_vector()) {
      throw std::invalid_argument("genetic parameter vector has wrong component count");
    }
    for (const auto& c : v.chromosomes) {
      if (c.size() != static_cast<std::size_t>(cfg.depth)) {
        throw std::invalid_argument("chromosome length does not match depth L");
      }
    }
  }
}

bool Genome::same_shape(const Genome& other) const {
  if (vectors.size() != other.vectors.size()) return false;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    const auto& a = vectors[j].chromosomes;
    const auto& b = other.vectors[j].chromosomes;
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k].size() != b[k].size()) return false;
    }
  }
  return true;
}

double decode(const Chromosome& c, const CodecConfig& cfg) {
  // sum_l (2 g_l - 1) / 2^l == (2k + 1 - 2^L) / 2^L for k the integer view;
  // the accumulation below is exact in binary floating point for L <= 52.
  double sum = 0.0;
  double weight = 0.5;
  for (const auto g : c.genes()) {
    sum += g ? weight : -weight;
    weight *= 0.5;
  }
  return cfg.half_range * sum;
}

linalg::ParameterVector decode_vector(const GeneticParameterVector& g, const CodecConfig& cfg) {
  linalg::ParameterVector p;
  p.components.reserve(g.chromosomes.size());
  for (const auto& c : g.chromosomes) p.components.push_back(decode(c, cfg));
  return p;
}

std::vector<linalg::ParameterVector> decode_genome(const Genome& g, const CodecConfig& cfg) {
  std::vector<linalg::ParameterVector> out;
  out.reserve(g.vectors.size());
  for (const auto& v : g.vectors) out.push_back(decode_vector(v, cfg));
  return out;
}

Chromosome encode_nearest(double value, const CodecConfig& cfg) {
  cfg.validate();
  const double levels = std::ldexp(1.0, cfg.depth);  // 2^L
  // value = R (2k + 1 - 2^L) / 2^L  =>  k = (value / R * 2^L + 2^L - 1) / 2
  double k = std::round((value / cfg.half_range * levels + levels - 1.0) / 2.0);
  if (k < 0.0) k = 0.0;
  if (k > levels - 1.0) k = levels - 1.0;
  auto index = static_cast<std::uint64_t>(k);

  std::vector<std::uint8_t> genes(static_cast<std::size_t>(cfg.depth));
  for (int l = cfg.depth - 1; l >= 0; --l) {
    genes[static_cast<std::size_t>(l)] = static_cast<std::uint8_t>(index & 1U);
    index >>= 1;
  }
  return Chromosome(std::move(genes));
}

GeneticParameterVector encode_nearest(const linalg::ParameterVector& p, const CodecConfig& cfg) {
  GeneticParameterVector g;
  g.chromosomes.reserve(p.size());
  for (const double v : p.components) g.chromosomes.push_back(encode_nearest(v, cfg));
  return g;
}

Chromosome random_chromosome(Rng& rng, const CodecConfig& cfg) {
  std::vector<std::uint8_t> genes(static_cast<std::size_t>(cfg.depth));
  for (auto& g : genes) g = rng.bit() ? 1 : 0;
  return Chromosome(std::move(genes));
}

Genome random_genome(Rng& rng, const CodecConfig& cfg, std::size_t slots) {
  cfg.validate();
  if (slots == 0) throw std::invalid_argument("a genome needs at least one trainable slot");
  Genome g;
  g.vectors.resize(slots);
  for (auto& v : g.vectors) {
    v.chromosomes.reserve(cfg.genes_per_vector());
    for (std::size_t k = 0; k < cfg.genes_per_vector(); ++k) {
      v.chromosomes.push_back(random_chromosome(rng, cfg));
    }
  }
  return g;
}

double rounding_error_bound(const CodecConfig& cfg, std::size_t slots) {
  const auto d = static_cast<double>(cfg.dim);
  return d * d * static_cast<double>(slots) * cfg.spacing();
}

std::string to_string(const Genome& g) {
  std::string out;
  for (std::size_t j = 0; j < g.vectors.size(); ++j) {
    if (j > 0) out.push_back(';');
    const auto& chromosomes = g.vectors[j].chromosomes;
    for (std::size_t k = 0; k < chromosomes.size(); ++k) {
      if (k > 0) out.push_back('/');
      out += chromosomes[k].to_string();
    }
  }
  return out;
}

Genome genome_from_string(std::string_view text) {
  Genome g;
  for (const auto slot : split(text, ';')) {
    GeneticParameterVector v;
    for (const auto bits : split(slot, '/')) v.chromosomes.push_back(Chromosome::from_string(bits));
    g.vectors.push_back(std::move(v));
  }
  return g;
}

}  // namespace unigen::genome
