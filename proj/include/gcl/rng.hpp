#pragma once

#include <cstdint>
#include <random>

namespace gcl {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to spread (seed, stream) pairs over the state space.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream i of a master seed: derive(seed, i) = mix64(mix64(seed) ^ mix64(i + 1)).
// Replicas seeded this way are reproducible regardless of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 1));
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(derive_seed(seed, stream));
}

}  // namespace gcl
