#pragma once

#include <cstdint>

namespace beurling {

/// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based uniform in (0, 1] keyed by (seed, j): the j-th draw does not
/// depend on how many draws were made before it.
inline constexpr double counter_uniform(std::uint64_t seed, std::uint64_t j) {
  const std::uint64_t k = mix64(mix64(seed) ^ mix64(j + 0x632be59bd9b4e019ULL));
  return static_cast<double>((k >> 11) + 1) * 0x1.0p-53;
}

}  // namespace beurling
