#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace unigen {

/// Seeded random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distributions are implemented here rather than taken from
/// <random>, because the standard leaves their algorithms to the vendor and
/// runs must be reproducible across toolchains.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on {0, ..., bound - 1}; bound must be positive. Unbiased (rejection).
  std::uint64_t below(std::uint64_t bound);
  /// Fair coin.
  bool bit() { return (engine_() >> 63) != 0; }
  /// True with probability p.
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

/// Labelled sub-stream seeds for one GA run. Each is
/// splitmix64(run_seed ^ fnv1a64(label)).
enum class StreamLabel { kInit, kSelection, kCrossover, kMutation };

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);
std::string_view label_name(StreamLabel label);
std::uint64_t derive_seed(std::uint64_t run_seed, StreamLabel label);

}  // namespace unigen
