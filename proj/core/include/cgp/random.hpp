#pragma once

#include <cstdint>
#include <random>

namespace cgp {

/// The single PRNG used across the library: 64-bit Mersenne Twister seeded
/// directly from the user's 64-bit seed. Streams are reproducible per binary;
/// the std distributions layered on top are implementation-defined, so no
/// cross-toolchain guarantee is made.
using Rng = std::mt19937_64;

/// Derives an independent child seed for a named sub-stream (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace cgp
