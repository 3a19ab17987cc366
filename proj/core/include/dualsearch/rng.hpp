#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dualsearch {

// Deterministic seeding utilities. Everything that draws randomness derives
// its seed through these so that reruns with the same config produce
// byte-identical artifacts regardless of platform or thread schedule.
// std::mt19937_64 output is specified by the standard; the raw-bits-to-double
// mapping below avoids the implementation-defined std distributions.

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::string_view b) {
  return mix_seed(a, fnv1a64(b));
}

/// Uniform double in [0, 1) from one 64-bit draw.
inline double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Stateless uniform draw in [0, 1) keyed by a seed tuple. Used where a
/// decision must be a pure function of its inputs (noise drops, sign flips).
inline double hash_unit(std::uint64_t seed, std::string_view key) {
  return bits_to_unit(splitmix64(mix_seed(seed, key)));
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_bits() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return bits_to_unit(engine_()); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t bounded(std::uint64_t n) { return engine_() % n; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace dualsearch
