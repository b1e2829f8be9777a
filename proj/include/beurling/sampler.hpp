#pragma once

// Inverse-CDF realization of a template as a discrete prime sequence, the
// exponential-sum deviation J(x, t), and the duplicate experiment.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/gen_primes.hpp"
#include "beurling/numeric.hpp"
#include "beurling/rng.hpp"
#include "beurling/sieve.hpp"
#include "beurling/template_fn.hpp"
#include "beurling/templates.hpp"

namespace beurling {

inline constexpr std::size_t kSampleChunk = 1024;

/// p_j = F^{-1}(j - 1 + U_j); returns 0 when that point lies beyond F(X).
/// `t_hint` is an optional log-x starting point for the continuous solver.
inline double sample_one(const TemplateFn& F, double X, std::uint64_t seed, std::uint64_t j, double f_X,
                         double* t_hint = nullptr) {
  const double U = counter_uniform(seed, j);
  const double base = static_cast<double>(j - 1);
  if (U > f_X - base) return 0.0;
  if (F.is_atomic()) {
    const double p = F.inverse_from(base, U);
    return p <= X ? p : 0.0;
  }
  const double t = F.inverse_log(base + U, t_hint ? *t_hint : -1.0);
  if (t_hint) *t_hint = t;
  const double p = std::exp(t);
  return (p > 1 && p <= X) ? p : 0.0;
}

/// Draws j = 1..ceil(F(X)) and keeps the p_j <= X. Work is split into fixed
/// chunks of kSampleChunk indices, so the result does not depend on `threads`.
inline GenPrimes sample_primes(const TemplateFn& F, double X, std::uint64_t seed, unsigned threads = 1) {
  if (!(X > 1)) throw DomainError("sample_primes: X must exceed 1");
  if (X > F.x_max() * (1 + 1e-15)) throw DomainError("sample_primes: X beyond the template cap");
  GenPrimes out;
  out.seed = seed;
  out.source = F.id();
  out.horizon = X;
  const double f_X = F.eval(X);
  if (!(f_X > 0)) return out;  // empty system
  const auto n = static_cast<std::uint64_t>(std::ceil(f_X));
  std::vector<double> p(n, 0.0);
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  parallel_for(
      chunks, threads,
      [&](std::size_t c) {
        double hint = -1.0;
        const std::uint64_t lo = c * kSampleChunk, hi = std::min<std::uint64_t>(n, lo + kSampleChunk);
        for (std::uint64_t i = lo; i < hi; ++i) p[i] = sample_one(F, X, seed, i + 1, f_X, &hint);
      },
      1);
  std::vector<double> kept;
  kept.reserve(n);
  for (double v : p)
    if (v > 0) kept.push_back(v);
  std::sort(kept.begin(), kept.end());  // solver tolerance can swap near-equal neighbours
  for (double v : kept) out.push_back(v, Provenance::Sampled);
  return out;
}

/// max over jump points of |pi_P(x) - F(x)|, using both the value at the jump
/// and the left limit.
struct SandwichReport {
  double max_deviation = 0;
  double at = 0;
  std::size_t jumps = 0;
};

inline SandwichReport counting_sandwich(const GenPrimes& primes, const TemplateFn& F) {
  SandwichReport r;
  const auto& v = primes.values;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t k = i;
    while (k < v.size() && v[k] == v[i]) ++k;
    const double f = F.eval(v[i]);
    const double d = std::max(std::abs(static_cast<double>(k) - f), std::abs(static_cast<double>(i) - f));
    if (d > r.max_deviation) {
      r.max_deviation = d;
      r.at = v[i];
    }
    ++r.jumps;
    i = k;
  }
  if (primes.horizon <= F.x_max()) {
    const double d = std::abs(static_cast<double>(v.size()) - F.eval(primes.horizon));
    if (d > r.max_deviation) {
      r.max_deviation = d;
      r.at = primes.horizon;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Deviation J(x, t) = sum_{p_j <= x} p_j^{-it} - int_1^x u^{-it} dF(u)

struct DeviationReport {
  std::vector<double> grid;
  std::vector<double> t_values;
  std::vector<std::vector<cplx>> J;  // J[it][ix]
  double exponent = 0.5;             // e in x^e + x^e sqrt(log(|t|+1)/log(x+1))
  double fitted_C = 0;
  double worst_x = 0, worst_t = 0;

  static double rhs(double x, double t, double e) {
    const double xe = std::pow(x, e);
    return xe + xe * std::sqrt(std::log(std::abs(t) + 1.0) / std::log(x + 1.0));
  }
};

namespace detail {

inline constexpr std::array<double, 4> kGL8x{0.18343464249564980, 0.52553240991632899, 0.79666647741362674,
                                             0.96028985649753623};
inline constexpr std::array<double, 4> kGL8w{0.36268378337836198, 0.31370664587788729, 0.22238103445337447,
                                             0.10122853629037626};

/// int_{a}^{b} e^{-itv} D(v)/v dv with v = log u, composite 8-point
/// Gauss-Legendre on panels no wider than `h`.
inline cplx continuous_mellin_segment(const TemplateFn& F, double t, double a, double b, double h) {
  if (!(b > a)) return 0.0;
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / h));
  const double w = (b - a) / static_cast<double>(panels);
  CompensatedSum<cplx> acc;
  for (std::size_t k = 0; k < panels; ++k) {
    const double c = a + (static_cast<double>(k) + 0.5) * w, r = 0.5 * w;
    for (int s = -1; s <= 1; s += 2)
      for (std::size_t i = 0; i < kGL8x.size(); ++i) {
        const double v = c + s * r * kGL8x[i];
        acc += kGL8w[i] * r * F.xlogx_deriv_log(v) / v * std::polar(1.0, -t * v);
      }
  }
  return acc.value();
}

}  // namespace detail

/// Exact J on x_grid for every t; parallel over t.
inline DeviationReport deviation_J(const GenPrimes& primes, const TemplateFn& F, std::vector<double> x_grid,
                                   std::vector<double> t_values, unsigned threads = 1) {
  if (primes.source != F.id()) throw DomainError("deviation_J: primes were not sampled from this template");
  for (auto p : primes.provenance)
    if (p != Provenance::Sampled) throw DomainError("deviation_J: expects a sampled system");
  std::sort(x_grid.begin(), x_grid.end());
  for (double x : x_grid)
    if (!(x >= 1) || x > primes.horizon) throw DomainError("deviation_J: grid point outside [1, horizon]");

  DeviationReport rep;
  rep.grid = x_grid;
  rep.t_values = t_values;
  rep.exponent = F.deviation_exponent();
  rep.J.assign(t_values.size(), std::vector<cplx>(x_grid.size()));
  const auto& v = primes.values;

  parallel_for(
      t_values.size(), threads,
      [&](std::size_t it) {
        const double t = t_values[it];
        CompensatedSum<cplx> sum_p, sum_f;
        std::size_t ip = 0, ia = 0;
        double v_prev = 0;
        const double h = std::min(0.25, 1.0 / (std::abs(t) + F.frequency() + 1e-300));
        for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
          const double x = x_grid[ix];
          while (ip < v.size() && v[ip] <= x) sum_p += std::polar(1.0, -t * std::log(v[ip++]));
          if (t == 0) {
            rep.J[it][ix] = sum_p.value() - F.eval(x);
            continue;
          }
          if (F.is_atomic()) {
            const auto& a = F.atom_locations();
            const auto& c = F.atom_cumulative();
            while (ia < a.size() && a[ia] <= x) {
              const double mass = c[ia] - (ia ? c[ia - 1] : 0.0);
              sum_f += mass * std::polar(1.0, -t * std::log(a[ia]));
              ++ia;
            }
          } else {
            const double lx = std::log(x);
            sum_f += detail::continuous_mellin_segment(F, t, v_prev, lx, h);
            v_prev = lx;
          }
          rep.J[it][ix] = sum_p.value() - sum_f.value();
        }
      },
      1);

  for (std::size_t it = 0; it < t_values.size(); ++it)
    for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
      const double c = std::abs(rep.J[it][ix]) / DeviationReport::rhs(x_grid[ix], t_values[it], rep.exponent);
      if (c > rep.fitted_C) {
        rep.fitted_C = c;
        rep.worst_x = x_grid[ix];
        rep.worst_t = t_values[it];
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Duplicates

/// Indices j with P_j = P_{j+1}; values are the duplicated primes.
inline std::vector<double> duplicates(const GenPrimes& primes) {
  std::vector<double> d;
  for (std::size_t i = 1; i < primes.size(); ++i)
    if (primes.values[i] == primes.values[i - 1]) d.push_back(primes.values[i]);
  return d;
}

struct DuplicateTable {
  double alpha = 0;
  double X = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> grid;
  std::vector<std::vector<std::size_t>> counts;  // counts[seed][ix]: duplicates <= grid[ix]
  std::vector<double> total;                     // summed over seeds
};

/// Samples the subtractive template with or without dE for every seed and
/// counts the duplicates below each grid point.
inline DuplicateTable duplicate_experiment(double alpha, double X, const std::vector<std::uint64_t>& seeds,
                                           bool error_measure = false, unsigned threads = 1,
                                           int points_per_decade = 20) {
  const auto primes = sieve_classical(X);
  const auto F = make_subtractive_F(alpha, primes, error_measure);
  DuplicateTable tab;
  tab.alpha = alpha;
  tab.X = X;
  tab.seeds = seeds;
  tab.grid = log_grid(2.0, X, points_per_decade);
  tab.counts.assign(seeds.size(), std::vector<std::size_t>(tab.grid.size(), 0));
  tab.total.assign(tab.grid.size(), 0.0);
  parallel_for(
      seeds.size(), threads,
      [&](std::size_t s) {
        const auto d = duplicates(sample_primes(F, X, seeds[s]));
        for (std::size_t ix = 0; ix < tab.grid.size(); ++ix)
          tab.counts[s][ix] = static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), tab.grid[ix]) - d.begin());
      },
      1);
  for (std::size_t s = 0; s < seeds.size(); ++s)
    for (std::size_t ix = 0; ix < tab.grid.size(); ++ix) tab.total[ix] += static_cast<double>(tab.counts[s][ix]);
  return tab;
}

/// Probability that P_j and P_{j+1} both land on q_j when dE = 0: with
/// a = j - F(q_j^-) and b = F(q_j) - j this is a * b <= (a + b)^2 / 4.
struct StraddleMass {
  double q;
  double below;  // a
  double above;  // b
};

inline std::vector<StraddleMass> straddle_masses(double alpha, const GenPrimes& primes) {
  const auto lay = subtractive_layout(alpha, primes);
  std::vector<StraddleMass> out;
  for (std::size_t j = 0; j < lay.transfer.size(); ++j) {
    const std::size_t i = lay.transfer[j];
    const double level = static_cast<double>(j + 1);
    const double prev = i ? lay.raw[i - 1] : 0.0;
    out.push_back({primes.values[i], level - prev, lay.raw[i] - level});
  }
  return out;
}

}  // namespace beurling
