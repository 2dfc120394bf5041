#include "unigen/random.hpp"

#include <limits>

namespace unigen {

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

bool Rng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view label_name(StreamLabel label) {
  switch (label) {
    case StreamLabel::kInit: return "init";
    case StreamLabel::kSelection: return "selection";
    case StreamLabel::kCrossover: return "crossover";
    case StreamLabel::kMutation: return "mutation";
  }
  return "unknown";
}

std::uint64_t derive_seed(std::uint64_t run_seed, StreamLabel label) {
  return splitmix64(run_seed ^ fnv1a64(label_name(label)));
}

}  // namespace unigen
