#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bandit_lab {

using Rng = std::mt19937_64;

/// Uniform draw on (0, 1] built from the top 53 bits of one engine output.
/// Independent of the standard library's distribution implementations, so
/// traces are reproducible across toolchains.
inline double uniform_open_closed(Rng& rng) {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return static_cast<double>((rng() >> 11) + 1) * kScale;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for the stream identified by (seed, algorithm, instance). A run's
/// randomness depends only on this key, never on batch composition.
inline std::uint64_t stream_seed(std::uint64_t seed, std::string_view algorithm,
                                 std::string_view instance) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ fnv1a(algorithm));
  h = splitmix64(h ^ fnv1a(instance));
  return h;
}

inline Rng make_stream(std::uint64_t seed, std::string_view algorithm,
                       std::string_view instance) {
  return Rng(stream_seed(seed, algorithm, instance));
}

}  // namespace bandit_lab
