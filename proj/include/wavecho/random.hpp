#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wavecho {

using Rng = std::mt19937_64;

// Open-interval uniform draw built from 53 raw bits so results do not depend
// on the standard library's distribution implementation.
inline double uniform_open(Rng& rng, double lo, double hi) {
  const std::uint64_t bits = rng() >> 11;
  const double unit = (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for a named sub-purpose of a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// FNV-1a; stable across platforms and runs, used to key per-run seeds.
inline std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace wavecho
