#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace flowgen {

/// SplitMix64 finalizer. Used for all seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of sample `index` under `master_seed`. Random access: sample i never
/// depends on any other index.
constexpr std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return mix64(master_seed ^ mix64(index));
}

/// Identifier of the derivation rule above, recorded in dataset manifests.
inline constexpr std::string_view kSeedRule = "splitmix64-xor-v1";

/// Seeded random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so the transforms to uniform/normal variates are
/// done here to keep datasets identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream; does not consume draws from this one.
  Rng fork(std::uint64_t tag) const { return Rng(mix64(seed_ ^ mix64(tag + 0x5851F42D4C957F2DULL))); }
  Rng fork(std::string_view tag) const { return fork(hash_tag(tag)); }
  Rng fork(std::string_view tag, std::uint64_t index) const {
    return fork(hash_tag(tag) ^ mix64(index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] (inclusive).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Box-Muller; one variate per call.
  double normal(double mean = 0.0, double stddev = 1.0);

  bool bernoulli(double p) { return uniform() < p; }

  static constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return h;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace flowgen
