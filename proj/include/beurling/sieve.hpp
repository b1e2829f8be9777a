#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/gen_primes.hpp"

namespace beurling {

inline constexpr double kSieveCap = 1e8;

/// Rational primes <= n as integers (odd-only Eratosthenes).
inline std::vector<std::uint32_t> primes_upto(std::uint64_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  out.push_back(2);
  const std::uint64_t m = (n - 1) / 2;  // index i <-> 2i + 1, i in [1, m]
  std::vector<bool> composite(m + 1, false);
  for (std::uint64_t i = 1; i <= m; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t j = (p * p - 1) / 2; j <= m; j += p) composite[j] = true;
  }
  return out;
}

/// All rational primes <= X, tagged classical, horizon X.
inline GenPrimes sieve_classical(double X) {
  if (!(X <= kSieveCap)) throw ResourceError("sieve_classical: X exceeds the 1e8 desk cap", X);
  GenPrimes g;
  g.horizon = X;
  if (X < 2) return g;
  const auto ps = primes_upto(static_cast<std::uint64_t>(std::floor(X)));
  g.values.reserve(ps.size());
  g.provenance.reserve(ps.size());
  g.scale.reserve(ps.size());
  for (auto p : ps) g.push_back(static_cast<double>(p), Provenance::Classical);
  return g;
}

}  // namespace beurling
