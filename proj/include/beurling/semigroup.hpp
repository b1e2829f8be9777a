#pragma once

// Generalized integers of a finite prime multiset, arithmetic weights, system
// transforms and the hyperbola convolution.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/gen_primes.hpp"
#include "beurling/numeric.hpp"
#include "beurling/step_table.hpp"

namespace beurling {

enum class WeightKind { Unit, Moebius, VonMangoldt, RiemannPi };

inline constexpr double kFactorizationCap = 1e8;

namespace detail {

struct DistinctValue {
  double value;
  int multiplicity;
};

inline std::vector<DistinctValue> distinct_values(const GenPrimes& primes) {
  std::vector<double> v = primes.values;
  std::sort(v.begin(), v.end());
  std::vector<DistinctValue> d;
  for (double x : v) {
    if (!(x > 1)) throw DomainError("enumerate: elements must exceed 1");
    if (!d.empty() && d.back().value == x)
      ++d.back().multiplicity;
    else
      d.push_back({x, 1});
  }
  return d;
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Number of factorizations of d^k using m equal primes of value d: k-
/// multisets of m elements (Unit) or signed k-subsets (Moebius).
inline double power_coefficient(WeightKind w, int m, int k) {
  if (w == WeightKind::Unit) return binom(m + k - 1, k);
  const double c = binom(m, k);
  return (k % 2) ? -c : c;
}

class Enumerator {
 public:
  Enumerator(const std::vector<DistinctValue>& d, double X, WeightKind w, std::vector<StepTable::Event>& out,
             double& budget)
      : d_(d), X_(X), w_(w), out_(out), budget_(budget) {}

  void from(std::size_t start, double prod, double weight) {
    for (std::size_t i = start; i < d_.size(); ++i) {
      const double p = d_[i].value;
      if (prod * p > X_) break;
      double q = prod;
      for (int k = 1;; ++k) {
        q *= p;
        if (q > X_) break;
        const double c = power_coefficient(w_, d_[i].multiplicity, k);
        if (c == 0) break;
        emit(q, weight * c);
        from(i + 1, q, weight * c);
      }
    }
  }

  void emit(double x, double weight) {
    if (--budget_ < 0) throw ResourceError("enumerate: factorization cap exceeded", static_cast<double>(out_.size()));
    out_.push_back({x, weight});
  }

 private:
  const std::vector<DistinctValue>& d_;
  double X_;
  WeightKind w_;
  std::vector<StepTable::Event>& out_;
  double& budget_;
};

}  // namespace detail

/// Cumulative weight over all factorizations with value <= x, as a table up
/// to X. Unit and Moebius walk exponent vectors depth-first over the distinct
/// values; VonMangoldt and RiemannPi only need prime powers.
inline StepTable enumerate(const GenPrimes& primes, double X, WeightKind weight, unsigned threads = 1,
                           double cap = kFactorizationCap) {
  if (!(X >= 1)) throw DomainError("enumerate: X must be >= 1");
  const auto d = detail::distinct_values(primes);
  const double horizon = std::min(X, primes.horizon);
  std::vector<StepTable::Event> events;

  if (weight == WeightKind::VonMangoldt || weight == WeightKind::RiemannPi) {
    for (const auto& e : d) {
      double q = e.value;
      for (int k = 1; q <= X; ++k, q *= e.value)
        events.push_back({q, weight == WeightKind::VonMangoldt ? e.multiplicity * std::log(e.value)
                                                               : static_cast<double>(e.multiplicity) / k});
    }
    return StepTable::from_events(std::move(events), horizon);
  }

  events.push_back({1.0, 1.0});
  std::size_t roots = 0;
  while (roots < d.size() && d[roots].value <= X) ++roots;
  std::vector<std::vector<StepTable::Event>> parts(roots);
  std::vector<double> budgets(roots, cap);
  parallel_for(
      roots, threads,
      [&](std::size_t i) {
        detail::Enumerator en(d, X, weight, parts[i], budgets[i]);
        double q = 1.0;
        for (int k = 1;; ++k) {
          q *= d[i].value;
          if (q > X) break;
          const double c = detail::power_coefficient(weight, d[i].multiplicity, k);
          if (c == 0) break;
          en.emit(q, c);
          en.from(i + 1, q, c);
        }
      },
      1);
  double total = 1;
  for (const auto& p : parts) total += static_cast<double>(p.size());
  if (total > cap) throw ResourceError("enumerate: factorization cap exceeded", total);
  events.reserve(static_cast<std::size_t>(total));
  for (auto& p : parts) events.insert(events.end(), p.begin(), p.end());
  return StepTable::from_events(std::move(events), horizon);
}

/// pi_P as a table.
inline StepTable counting_table(const GenPrimes& primes) {
  std::vector<StepTable::Event> e;
  for (double v : primes.values) e.push_back({v, 1.0});
  return StepTable::from_events(std::move(e), primes.horizon);
}

/// sum_{n l <= x} a(n) h(l) split at y:
///   sum_{n<=y} a(n) L(x/n) + sum_{l<=x/y} h(l) N(x/l) - N(y) L(x/y).
/// a and h are the increments of N_tab and L_tab; "n l <= x" is read as
/// l <= x / n.
inline double hyperbola_convolve(const StepTable& N_tab, const StepTable& L_tab, double x, double y) {
  if (!(y >= 1 && y <= x)) throw DomainError("hyperbola_convolve: need 1 <= y <= x");
  if (N_tab.horizon() < x || L_tab.horizon() < x) throw DomainError("hyperbola_convolve: tables end before x");
  CompensatedSum<double> s;
  const auto& nx = N_tab.xs();
  const auto& na = N_tab.increments();
  for (std::size_t i = 0; i < nx.size() && nx[i] <= y; ++i) s += na[i] * L_tab.query(x / nx[i]);
  const double xy = x / y;
  const auto& lx = L_tab.xs();
  const auto& lh = L_tab.increments();
  for (std::size_t i = 0; i < lx.size() && lx[i] <= xy; ++i) s += lh[i] * N_tab.query(x / lx[i]);
  s += -N_tab.query(y) * L_tab.query(xy);
  return s.value();
}

/// Direct double sum, for checking hyperbola_convolve.
inline double convolve_brute(const StepTable& N_tab, const StepTable& L_tab, double x) {
  CompensatedSum<double> s;
  for (std::size_t i = 0; i < N_tab.size(); ++i)
    for (std::size_t j = 0; j < L_tab.size(); ++j)
      if (L_tab.xs()[j] <= x / N_tab.xs()[i]) s += N_tab.increments()[i] * L_tab.increments()[j];
  return s.value();
}

/// y = x^{(beta - delta)/(1 - gamma + beta - delta)}.
inline double optimal_y(double beta, double gamma, double delta, double x) {
  if (!(gamma >= 0 && delta >= 0 && gamma < beta && delta < beta && beta < 1))
    throw DomainError("optimal_y: need 0 <= gamma, delta < beta < 1");
  if (!(x >= 1)) throw DomainError("optimal_y: x must be >= 1");
  return std::pow(x, (beta - delta) / (1.0 - gamma + beta - delta));
}

/// Adds p^{1/beta} <= X for every classical p in `primes`.
inline GenPrimes adjoin_scaled(const GenPrimes& primes, double beta, double X) {
  if (!(beta > 0 && beta < 1)) throw DomainError("adjoin_scaled: beta must lie in (0,1)");
  GenPrimes out = primes;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes.provenance[i] != Provenance::Classical) continue;
    const double q = std::pow(primes.values[i], 1.0 / beta);
    if (q <= X) out.push_back(q, Provenance::Scaled, beta);
  }
  out.horizon = std::min(primes.horizon, X);
  out.sort();
  return out;
}

/// Multiset union; tags kept.
inline GenPrimes unite(const GenPrimes& a, const GenPrimes& b) {
  GenPrimes out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.values[i], b.provenance[i], b.scale[i]);
  out.horizon = std::min(a.horizon, b.horizon);
  out.source.clear();
  out.seed.reset();
  out.sort();
  return out;
}

/// Multiset difference by exact value; each element of `sub` removes one
/// matching element of `primes`, preferring a non-scaled one.
inline GenPrimes subtract(const GenPrimes& primes, const GenPrimes& sub) {
  std::vector<double> s = sub.values;
  std::sort(s.begin(), s.end());
  std::vector<bool> removed(primes.size(), false);
  std::size_t i = 0;
  for (std::size_t k = 0; k < s.size();) {
    const double v = s[k];
    std::size_t need = 0;
    while (k < s.size() && s[k] == v) ++need, ++k;
    while (i < primes.size() && primes.values[i] < v) ++i;
    std::vector<std::size_t> cand;
    for (std::size_t j = i; j < primes.size() && primes.values[j] == v; ++j) cand.push_back(j);
    std::stable_partition(cand.begin(), cand.end(),
                          [&](std::size_t j) { return primes.provenance[j] != Provenance::Scaled; });
    if (cand.size() < need)
      throw DomainError("subtract: element " + StepTable::format_double(v) + " not contained with enough multiplicity");
    for (std::size_t c = 0; c < need; ++c) removed[cand[c]] = true;
  }
  GenPrimes out;
  out.horizon = std::min(primes.horizon, sub.horizon);
  for (std::size_t j = 0; j < primes.size(); ++j)
    if (!removed[j]) out.push_back(primes.values[j], primes.provenance[j], primes.scale[j]);
  return out;
}

}  // namespace beurling
