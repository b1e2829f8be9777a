#pragma once

// Li(x^z), li(x^z), their derivatives and Mellin transforms for complex z.
//
// Everything is expressed through w = z log x. With S(w) = sum w^n/(n n!)
// we have Li(x^z) = S(w), and the power series is used directly while it is
// numerically benign. Far from the positive real axis the terms grow like
// e^{|w|} while the sum is of size e^{Re w}, so there we switch to
// S(w) = -E1(-w) - Log(-w) - gamma with a continued fraction for E1.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/numeric.hpp"
#include "beurling/zeta.hpp"

namespace beurling {

/// Truncation control for the power series.
struct SeriesBudget {
  double rel_tol = 1e-14;
  int max_terms = 4096;

  void validate() const {
    if (!(rel_tol > 0)) throw DomainError("SeriesBudget: rel_tol must be positive");
    if (max_terms < 64) throw DomainError("SeriesBudget: max_terms must be at least 64");
  }
};

namespace detail {

// Cancellation (in units of e-folds) above which the raw series is abandoned.
inline constexpr double kMaxSeriesLoss = 8.0;

inline double series_loss(cplx w) { return std::abs(w) - std::max(w.real(), 0.0); }

// Generic power series sum_{n>=1} w^n c(n) / n!, with c supplied by `coef`.
// `min_terms` implements the rule that no stop is allowed before the terms
// have peaked.
template <typename T, typename Coef>
T factorial_series(T w, double min_terms, const SeriesBudget& budget, Coef coef, const char* who) {
  if (w == T(0)) return T(0);
  CompensatedSum<T> acc;
  T power = T(1);  // w^n / n!
  for (int n = 1; n <= budget.max_terms; ++n) {
    power *= w / static_cast<double>(n);
    const T term = power * coef(n);
    acc += term;
    if (n > min_terms && std::abs(term) < budget.rel_tol * std::abs(acc.value())) return acc.value();
    if (!std::isfinite(std::abs(acc.value())))
      throw TruncationError(std::string(who) + ": series overflow");
  }
  throw TruncationError(std::string(who) + ": series budget exhausted before convergence");
}

// E1(u) = int_u^inf e^{-t}/t dt, principal branch, via the even continued
// fraction evaluated with the modified Lentz method. Used only for |u| > 4.
inline cplx expint_E1_cf(cplx u) {
  constexpr double tiny = 1e-300;
  constexpr int max_iter = 20000;
  cplx b = u + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i <= max_iter; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-u);
  }
  throw TruncationError("expint_E1: continued fraction did not converge");
}

template <typename T>
T S_series(T w, double min_terms, const SeriesBudget& budget) {
  return factorial_series<T>(w, min_terms, budget, [](int n) { return 1.0 / n; }, "Li_pow");
}

// S(w) = sum w^n/(n n!); `log_x` only enters the minimum-term rule.
inline cplx S_eval(cplx w, double log_x, const SeriesBudget& budget) {
  if (series_loss(w) <= kMaxSeriesLoss) {
    if (w.imag() == 0.0) return S_series<double>(w.real(), 2.0 * std::max(log_x, std::abs(w)), budget);
    return S_series<cplx>(w, 2.0 * std::max(log_x, std::abs(w)), budget);
  }
  const cplx u = -w;
  return -expint_E1_cf(u) - std::log(u) - kEulerGamma;
}

// c_n(K) = sum_{k > K} mu(k) k^{-n-1} at K = 16, 32, ..., kTailKmax.
class MoebiusTail {
 public:
  static constexpr int kMaxN = 24;
  static constexpr int kMinLog2K = 4;
  static constexpr int kMaxLog2K = 20;
  static constexpr std::size_t kKmax = std::size_t{1} << kMaxLog2K;

  static const MoebiusTail& instance() {
    static const MoebiusTail t;
    return t;
  }

  double c(int n, int log2K) const { return table_[log2K - kMinLog2K][n - 1]; }
  int mu(std::size_t k) const { return mu_[k]; }

 private:
  MoebiusTail() : mu_(moebius_table(kKmax)) {
    const auto& z = ZetaOracle::instance();
    constexpr int rows = kMaxLog2K - kMinLog2K + 1;
    table_.assign(rows, {});
    // n = 1, 2: 1/zeta(n+1) minus the prefix; the suffix cut at kKmax would
    // leave an error of order kKmax^{-n}/n there.
    {
      std::array<CompensatedSum<double>, 2> prefix;
      int row = 0;
      for (std::size_t k = 1; k <= kKmax; ++k) {
        if (mu_[k] != 0) {
          const double inv = 1.0 / static_cast<double>(k);
          prefix[0] += mu_[k] * inv * inv;
          prefix[1] += mu_[k] * inv * inv * inv;
        }
        if (k == (std::size_t{1} << (kMinLog2K + row))) {
          table_[row][0] = z.reciprocal(2) - prefix[0].value();
          table_[row][1] = z.reciprocal(3) - prefix[1].value();
          ++row;
        }
      }
    }
    // n >= 3: direct suffix sums, smallest terms first.
    std::array<CompensatedSum<double>, kMaxN> suffix;
    int row = rows - 1;
    for (std::size_t k = kKmax; k > (std::size_t{1} << kMinLog2K); --k) {
      if (k == (std::size_t{1} << (kMinLog2K + row))) {
        for (int n = 3; n <= kMaxN; ++n) table_[row][n - 1] = suffix[n - 1].value();
        --row;
      }
      if (mu_[k] == 0) continue;
      const double inv = 1.0 / static_cast<double>(k);
      double p = inv * inv * inv * inv;
      for (int n = 3; n <= kMaxN; ++n) {
        suffix[n - 1] += mu_[k] * p;
        p *= inv;
      }
    }
    for (int n = 3; n <= kMaxN; ++n) table_[0][n - 1] = suffix[n - 1].value();
  }

  std::vector<std::int8_t> mu_;
  std::vector<std::array<double, kMaxN>> table_;
};

// Picks the Moebius cut K = 2^j >= max(16, 4|w|) so that the tail series in
// w/K converges geometrically.
inline int tail_log2K(cplx w) {
  const double need = std::max(16.0, 4.0 * std::abs(w));
  const int j = static_cast<int>(std::ceil(std::log2(need) - 1e-12));
  if (j > MoebiusTail::kMaxLog2K)
    throw TruncationError("li_pow: |z log x| too large for the Moebius tail table");
  return std::max(j, MoebiusTail::kMinLog2K);
}

// sum_n w^n c_n(K) / (n! * n^p), p = 1 for li and p = 0 for x log x li'.
inline cplx moebius_tail_series(cplx w, int log2K, bool divide_by_n) {
  const auto& tail = MoebiusTail::instance();
  CompensatedSum<cplx> acc;
  cplx power = 1.0;
  for (int n = 1; n <= MoebiusTail::kMaxN; ++n) {
    power *= w / static_cast<double>(n);
    acc += power * tail.c(n, log2K) / (divide_by_n ? static_cast<double>(n) : 1.0);
  }
  return acc.value();
}

inline cplx expm1_c(cplx w) {
  const double a = w.real(), b = w.imag();
  if (b == 0.0) return std::expm1(a);
  const double s = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

inline void check_x(double x, const char* who) {
  if (!(x >= 1.0)) throw DomainError(std::string(who) + ": requires x >= 1");
}

// Series at w = a log x for real a > 0 in long double, with log x taken in
// long double too: near x = 1e8 half an ulp of a double log x already moves
// li by about 1e-8.
template <typename Coef>
double real_series_extended(double x, double a, const SeriesBudget& budget, Coef coef, const char* who) {
  const long double w = static_cast<long double>(a) * std::log(static_cast<long double>(x));
  SeriesBudget tight = budget;
  tight.rel_tol = std::min(budget.rel_tol, 1e-20);
  const double min_terms = 2.0 * std::max(std::log(x), static_cast<double>(w));
  return static_cast<double>(factorial_series<long double>(w, min_terms, tight, coef, who));
}

}  // namespace detail

/// Li(x^z) from log x.
inline cplx Li_pow_log(double log_x, cplx z, const SeriesBudget& budget = {}) {
  budget.validate();
  if (!(log_x >= 0)) throw DomainError("Li_pow: requires x >= 1");
  return detail::S_eval(z * log_x, log_x, budget);
}

/// Li(x^z) = sum z^n (log x)^n / (n n!).
inline cplx Li_pow(double x, cplx z, const SeriesBudget& budget = {}) {
  detail::check_x(x, "Li_pow");
  if (z.imag() == 0.0 && z.real() > 0.0 && x > 1.0) {
    budget.validate();
    return detail::real_series_extended(x, z.real(), budget, [](int n) { return 1.0L / n; }, "Li_pow");
  }
  return Li_pow_log(std::log(x), z, budget);
}

/// Real Li(x^a) for real a; the common case in templates.
inline double Li_pow_real_log(double log_x, double a, const SeriesBudget& budget = {}) {
  return Li_pow_log(log_x, cplx(a, 0.0), budget).real();
}

/// Ein(w) = int_0^w (1 - e^{-t})/t dt = -S(-w).
inline cplx Ein(cplx w, const SeriesBudget& budget = {}) {
  budget.validate();
  return -detail::S_eval(-w, 0.0, budget);
}

/// li(x^z) from log x.
inline cplx li_pow_log(double log_x, cplx z, const SeriesBudget& budget = {}) {
  budget.validate();
  if (!(log_x >= 0)) throw DomainError("li_pow: requires x >= 1");
  const cplx w = z * log_x;
  if (w == cplx(0.0)) return 0.0;
  const auto& zeta = ZetaOracle::instance();
  const double min_terms = 2.0 * std::max(log_x, std::abs(w));
  if (detail::series_loss(w) <= detail::kMaxSeriesLoss) {
    auto coef = [&](int n) { return zeta.reciprocal(n + 1) / n; };
    if (w.imag() == 0.0)
      return detail::factorial_series<double>(w.real(), min_terms, budget, coef, "li_pow");
    return detail::factorial_series<cplx>(w, min_terms, budget, coef, "li_pow");
  }
  const int j = detail::tail_log2K(w);
  const std::size_t K = std::size_t{1} << j;
  const auto& tail = detail::MoebiusTail::instance();
  CompensatedSum<cplx> acc;
  for (std::size_t k = 1; k <= K; ++k) {
    const int mu = tail.mu(k);
    if (mu == 0) continue;
    const double kd = static_cast<double>(k);
    acc += static_cast<double>(mu) / kd * detail::S_eval(w / kd, log_x / kd, budget);
  }
  acc += detail::moebius_tail_series(w, j, true);
  return acc.value();
}

/// li(x^z) = sum_k mu(k)/k Li(x^{z/k}).
inline cplx li_pow(double x, cplx z, const SeriesBudget& budget = {}) {
  detail::check_x(x, "li_pow");
  if (z.imag() == 0.0 && z.real() > 0.0 && x > 1.0) {
    budget.validate();
    const auto& zeta = ZetaOracle::instance();
    return detail::real_series_extended(
        x, z.real(), budget, [&](int n) { return static_cast<long double>(zeta.reciprocal(n + 1)) / n; }, "li_pow");
  }
  return li_pow_log(std::log(x), z, budget);
}

inline double li_pow_real_log(double log_x, double a, const SeriesBudget& budget = {}) {
  return li_pow_log(log_x, cplx(a, 0.0), budget).real();
}

/// x log x d/dx li(x^z) = sum_n z^n (log x)^n / (n! zeta(n+1)), from log x.
inline cplx li_pow_xlogx_deriv_log(double log_x, cplx z, const SeriesBudget& budget = {}) {
  budget.validate();
  if (!(log_x >= 0)) throw DomainError("li_pow_deriv: requires x >= 1");
  const cplx w = z * log_x;
  if (w == cplx(0.0)) return 0.0;
  const auto& zeta = ZetaOracle::instance();
  const double min_terms = 2.0 * std::max(log_x, std::abs(w));
  if (detail::series_loss(w) <= detail::kMaxSeriesLoss) {
    auto coef = [&](int n) { return zeta.reciprocal(n + 1); };
    if (w.imag() == 0.0)
      return detail::factorial_series<double>(w.real(), min_terms, budget, coef, "li_pow_deriv");
    return detail::factorial_series<cplx>(w, min_terms, budget, coef, "li_pow_deriv");
  }
  const int j = detail::tail_log2K(w);
  const std::size_t K = std::size_t{1} << j;
  const auto& tail = detail::MoebiusTail::instance();
  CompensatedSum<cplx> acc;
  for (std::size_t k = 1; k <= K; ++k) {
    const int mu = tail.mu(k);
    if (mu == 0) continue;
    const double kd = static_cast<double>(k);
    acc += static_cast<double>(mu) / kd * detail::expm1_c(w / kd);
  }
  acc += detail::moebius_tail_series(w, j, false);
  return acc.value();
}

/// d/dx li(x^z) for x > 1.
inline cplx li_pow_deriv(double x, cplx z, const SeriesBudget& budget = {}) {
  if (x == 1.0) throw DomainError("li_pow_deriv: singular at x = 1");
  if (!(x > 1.0)) throw DomainError("li_pow_deriv: requires x > 1");
  const double lx = std::log(x);
  return li_pow_xlogx_deriv_log(lx, z, budget) / (x * lx);
}

/// x log x d/dx Li(x^z) = x^z - 1, from log x.
inline cplx Li_pow_xlogx_deriv_log(double log_x, cplx z) { return detail::expm1_c(z * log_x); }

/// Mellin-Stieltjes transform int_1^inf x^{-s} dLi(x^z) = log(s/(s-z)).
inline cplx mellin_dLi(cplx s, cplx z) {
  if (s == z) throw PoleError("mellin_dLi: pole at s = z");
  if (!(s.real() > std::max(0.0, z.real())))
    throw DomainError("mellin_dLi: requires Re s > max(0, Re z)");
  if (z == cplx(0.0)) return 0.0;
  return std::log(s) - std::log(s - z);
}

/// int_1^X x^{-s} dLi(x^z) = Ein(s L) - Ein((s - z) L) with L = log X; valid
/// for every s.
inline cplx mellin_dLi_truncated(cplx s, cplx z, double log_X, const SeriesBudget& budget = {}) {
  if (!(log_X >= 0)) throw DomainError("mellin_dLi_truncated: requires X >= 1");
  if (z == cplx(0.0) || log_X == 0.0) return 0.0;
  return Ein(s * log_X, budget) - Ein((s - z) * log_X, budget);
}

/// Classical Li(x) and li(x).
inline double Li(double x) { return Li_pow(x, 1.0).real(); }
inline double li(double x) { return li_pow(x, 1.0).real(); }

}  // namespace beurling
