#pragma once

// Seeded randomness. Every Monte Carlo block gets its own generator whose seed
// is a hash of (master seed, subcommand, grid index, block index), so results
// do not depend on how blocks are scheduled across threads.

#include <cstdint>
#include <random>
#include <string_view>

namespace qbf {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view subcommand,
                                    std::uint64_t p_index, std::uint64_t block_index) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ fnv1a(subcommand));
  h = mix64(h ^ p_index);
  return mix64(h ^ block_index);
}

// Uniform double in [0,1) from the top 53 bits; unlike
// std::uniform_real_distribution this is identical across standard libraries.
inline double u01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double prob) { return u01(rng) < prob; }

}  // namespace qbf
