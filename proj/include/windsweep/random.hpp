#pragma once

#include <cstdint>
#include <random>

namespace windsweep {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; derives independent child seeds from (seed, stream).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream ids for derive_seed.
inline constexpr std::uint64_t kStreamSampling = 1;
inline constexpr std::uint64_t kStreamRansac = 2;
inline constexpr std::uint64_t kStreamFolds = 3;

}  // namespace windsweep
