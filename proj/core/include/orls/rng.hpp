#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based deterministic random streams.
//
// Every random quantity in this library is a pure function of a 64-bit seed
// and a 64-bit counter, so measurement streams are reproducible and
// order-independent regardless of thread count. The generator is the
// splitmix64 finalizer applied to seed + (index + 1) * kStreamStep, uniform
// doubles take the top 53 bits, and the uniform-to-Gaussian conversion is the
// Box-Muller transform on counters (2*index, 2*index + 1).
//
// This contract is version-pinned: changing any constant or formula below is
// a breaking change to recorded mask files and measurement streams (see the
// Randomness section in the README, and the frozen values in the tests).

namespace orls::rng {

inline constexpr std::uint64_t kStreamStep = 0x9e3779b97f4a7c15ULL;

[[nodiscard]] inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + (index + 1) * kStreamStep;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1).
[[nodiscard]] inline double uniform01(std::uint64_t seed, std::uint64_t index) noexcept {
  return static_cast<double>(counter_hash(seed, index) >> 11) * 0x1.0p-53;
}

// Standard normal draw at the given counter.
// radius uses log(1 - u1), finite since u1 < 1.
[[nodiscard]] inline double gaussian(std::uint64_t seed, std::uint64_t index) noexcept {
  const double u1 = uniform01(seed, 2 * index);
  const double u2 = uniform01(seed, 2 * index + 1);
  const double radius = std::sqrt(-2.0 * std::log1p(-u1));
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

// Independent child stream seed (one per mask index, color channel, ...).
[[nodiscard]] inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return counter_hash(seed, index);
}

}  // namespace orls::rng
