#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fcov {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/**
 * @brief Derive a child seed from a parent seed and a path of counters.
 *
 * Each level hashes (parent, counter) so that distinct counter paths give
 * distinct, statistically independent streams. Stream identity depends only
 * on the path, never on scheduling order.
 */
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t s = mix64(seed);
  for (std::uint64_t c : path) {
    s = mix64(s ^ mix64(c + 0x632BE59BD9B4E019ULL));
  }
  return s;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
  return Rng{derive_seed(seed, path)};
}

/// Fresh nondeterministic seed, used when the caller does not provide one.
inline std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace fcov
