#pragma once

#include <cstdint>

namespace sphrase {

// All randomness in the project flows through this generator so that runs
// are reproducible from a single 64-bit seed, independent of the standard
// library's distribution implementations.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and up to three keys.
inline constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                                        std::uint64_t b = 0,
                                        std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed ^ 0x6A09E667F3BCC909ULL);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

/// SplitMix64 stream.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n). n must be > 0.
  constexpr std::uint64_t uniform(std::uint64_t n) {
    // Multiply-shift reduction; bias is < n / 2^64, immaterial here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform double in [0, 1).
  constexpr double uniform_real() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace sphrase
