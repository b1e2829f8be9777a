#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

#include "beurling/errors.hpp"

namespace beurling {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Neumaier-compensated running sum.
template <typename T>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(T init) : sum_(init) {}

  void add(T v) {
    if constexpr (std::is_same_v<T, cplx>) {
      double re = sum_.real(), im = sum_.imag();
      double cre = comp_.real(), cim = comp_.imag();
      step(re, cre, v.real());
      step(im, cim, v.imag());
      sum_ = {re, im};
      comp_ = {cre, cim};
    } else {
      step(sum_, comp_, v);
    }
  }
  CompensatedSum& operator+=(T v) {
    add(v);
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  template <typename R>
  static void step(R& sum, R& comp, R v) {
    R t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }

  T sum_{};
  T comp_{};
};

namespace detail {

inline std::vector<std::int8_t> build_moebius_table(std::size_t n) {
  std::vector<std::int8_t> mu(n + 1, 1);
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint32_t> primes;
  mu[0] = 0;
  for (std::size_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      mu[i] = -1;
    }
    for (std::uint32_t p : primes) {
      std::size_t ip = i * p;
      if (ip > n) break;
      composite[ip] = true;
      if (i % p == 0) {
        mu[ip] = 0;
        break;
      }
      mu[ip] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  return mu;
}

inline constexpr std::size_t kMoebiusTableSize = std::size_t{1} << 16;

inline const std::vector<std::int8_t>& moebius_small() {
  static const std::vector<std::int8_t> table = build_moebius_table(kMoebiusTableSize);
  return table;
}

}  // namespace detail

/// Classical Moebius function; table lookup for small k, trial factorisation
/// beyond.
inline int moebius(std::uint64_t k) {
  if (k == 0) throw DomainError("moebius: k must be positive");
  if (k <= detail::kMoebiusTableSize) return detail::moebius_small()[k];
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= k; ++p) {
    if (k % p != 0) continue;
    k /= p;
    if (k % p == 0) return 0;
    sign = -sign;
  }
  if (k > 1) sign = -sign;
  return sign;
}

/// Moebius values mu(0..n) by a linear sieve (mu(0) = 0).
inline std::vector<std::int8_t> moebius_table(std::size_t n) {
  return detail::build_moebius_table(n);
}

/// Geometric grid from lo to hi (inclusive) with the given ratio.
inline std::vector<double> geometric_grid(double lo, double hi, double ratio) {
  if (!(lo > 0) || !(hi >= lo) || !(ratio > 1))
    throw DomainError("geometric_grid: need 0 < lo <= hi and ratio > 1");
  std::vector<double> g;
  const double step = std::log(ratio);
  const double span = std::log(hi / lo);
  const auto n = static_cast<std::size_t>(std::ceil(span / step - 1e-12));
  g.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) g.push_back(lo * std::exp(step * static_cast<double>(i)));
  g.push_back(hi);
  return g;
}

/// `points_per_decade` log-spaced points on [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  return geometric_grid(lo, hi, std::pow(10.0, 1.0 / points_per_decade));
}

/// Runs f(i) for i in [0, n) split into fixed-size chunks so that results do
/// not depend on the worker count.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& f,
                         std::size_t chunk = 64) {
  if (threads <= 1 || n <= chunk) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::size_t next = 0;
  std::mutex m;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      std::size_t c;
      {
        std::lock_guard lk(m);
        if (next >= nchunks || failure) return;
        c = next++;
      }
      try {
        for (std::size_t i = c * chunk; i < std::min(n, (c + 1) * chunk); ++i) f(i);
      } catch (...) {
        std::lock_guard lk(m);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, nchunks); ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace beurling
