#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/numeric.hpp"

namespace beurling {

namespace detail {

// Dirichlet eta via the Cohen-Rodriguez Villegas-Zagier weights. The error
// after n terms is at most (1 + 2|t|) e^{pi |t| / 2} (3 + sqrt 8)^{-n} for
// Re s > 0, so n grows with |Im s|.
inline cplx eta_cvz(cplx s) {
  const double t = std::abs(s.imag());
  const double ln_rate = std::log(3.0 + std::sqrt(8.0));
  const double needed = (std::log(1e17) + kPi * t / 2.0 + std::log1p(2.0 * t)) / ln_rate;
  const int n = static_cast<int>(std::ceil(needed)) + 2;
  if (n > 400) throw TruncationError("zeta_eval: |Im s| too large for double-precision eta acceleration");
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = (d + 1.0 / d) / 2.0;
  double b = -1.0;
  double c = -d;
  CompensatedSum<cplx> acc;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    const cplx term = std::exp(-s * std::log(static_cast<double>(k + 1)));
    acc += c * term;  // c alternates in sign
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return acc.value() / d;
}

}  // namespace detail

/// Riemann zeta on Re s > 0, s != 1, through the alternating eta series.
inline cplx zeta_eval(cplx s) {
  if (!(s.real() > 0.0)) throw DomainError("zeta_eval: requires Re s > 0");
  if (s == cplx(1.0, 0.0)) throw PoleError("zeta_eval: pole at s = 1");
  const cplx eta = detail::eta_cvz(s);
  const cplx factor = 1.0 - std::exp((1.0 - s) * std::log(2.0));
  if (std::abs(factor) == 0.0) throw PoleError("zeta_eval: eta-to-zeta factor vanishes");
  return eta / factor;
}

inline double zeta_eval(double s) { return zeta_eval(cplx(s, 0.0)).real(); }

/// Cached zeta(n) for integers n >= 2.
class ZetaOracle {
 public:
  static const ZetaOracle& instance() {
    static const ZetaOracle oracle;
    return oracle;
  }

  /// zeta(n) for n >= 2.
  double at_integer(std::size_t n) const {
    if (n < 2) throw PoleError("ZetaOracle: zeta(n) requires n >= 2");
    if (n < values_.size()) return values_[n];
    return large_n(n);
  }
  /// 1 / zeta(n) for n >= 2.
  double reciprocal(std::size_t n) const {
    if (n < 2) throw PoleError("ZetaOracle: zeta(n) requires n >= 2");
    if (n < reciprocals_.size()) return reciprocals_[n];
    return 1.0 / large_n(n);
  }
  std::size_t cached() const { return values_.size(); }

 private:
  static constexpr std::size_t kCache = 8192;

  ZetaOracle() : values_(kCache, 0.0), reciprocals_(kCache, 0.0) {
    for (std::size_t n = 2; n < kCache; ++n) {
      values_[n] = n < 64 ? euler_maclaurin(static_cast<double>(n)) : large_n(n);
      reciprocals_[n] = 1.0 / values_[n];
    }
  }

  // Euler-Maclaurin with cut N = 12 and eight Bernoulli corrections; the
  // remainder is far below one ulp for every s >= 2.
  static double euler_maclaurin(double s) {
    constexpr int N = 12;
    static constexpr double kB2j[] = {1.0 / 6,  -1.0 / 30,     1.0 / 42, -1.0 / 30,
                                      5.0 / 66, -691.0 / 2730, 7.0 / 6,  -3617.0 / 510};
    CompensatedSum<double> acc;
    acc += std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0);
    acc += 0.5 * std::pow(static_cast<double>(N), -s);
    double rising = s;  // s (s+1) ... (s+2j-2)
    double fact = 2.0;  // (2j)!
    for (int j = 1; j <= 8; ++j) {
      if (j > 1) {
        rising *= (s + 2 * j - 3) * (s + 2 * j - 2);
        fact *= (2.0 * j - 1) * (2.0 * j);
      }
      acc += kB2j[j - 1] / fact * rising * std::pow(static_cast<double>(N), -s - 2 * j + 1);
    }
    for (int k = N - 1; k >= 1; --k) acc += std::pow(static_cast<double>(k), -s);
    return acc.value();
  }

  // For n >= 64 the terms beyond 3^{-n} are below one ulp of 1.
  static double large_n(std::size_t n) {
    const double nd = static_cast<double>(n);
    return 1.0 + std::exp2(-nd) + std::pow(3.0, -nd);
  }

  std::vector<double> values_;
  std::vector<double> reciprocals_;
};

}  // namespace beurling
