#pragma once

#include <cstdint>

namespace relaysim {

/// xoshiro256++ stream with splitmix64 seeding. Seedable and splittable:
/// `Rng::stream(master, k)` derives statistically independent streams for
/// parallel sweep points, reproducible from (master seed, point index).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    return Rng(mix(master_seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1))));
  }

  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      word = mix(x);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

}  // namespace relaysim
