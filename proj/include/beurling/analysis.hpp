#pragma once

// Measurements: residual exponents, Euler products and Dirichlet sums, the
// E/Z factorization, eta_l and zeta_C growth, and the constants I(beta), H(1).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/gen_primes.hpp"
#include "beurling/logint.hpp"
#include "beurling/numeric.hpp"
#include "beurling/step_table.hpp"
#include "beurling/templates.hpp"
#include "beurling/zeta.hpp"

namespace beurling {

// ---------------------------------------------------------------------------
// Residual exponents

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  std::size_t n = 0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("least_squares: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  if (!(sxx > 0)) throw DomainError("least_squares: degenerate abscissae");
  LinearFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      ssr += r * r;
    }
    f.stderr_slope = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  }
  return f;
}

struct FitOptions {
  int points_per_decade = 20;
  double window_lo = 0;  // 0: sqrt(X)
  double window_hi = 0;  // 0: X
};

struct ResidualFit {
  std::vector<double> grid;
  std::vector<double> residuals;    // |table - model| at grid points
  std::vector<double> running_max;  // sup of the residual over events <= x
  double exponent = 0;
  double stderr_exponent = 0;
  double window_lo = 0, window_hi = 0;
  std::size_t n_points = 0;

  bool degenerate() const { return std::isinf(exponent) && exponent < 0; }
};

/// Slope of log(running max |table - model|) against log x on the window.
/// The residual is taken at every event, on both sides of the jump.
inline ResidualFit residual_exponent(const StepTable& table, const std::function<double(double)>& model,
                                     const FitOptions& opt = {}) {
  if (table.empty()) throw DomainError("residual_exponent: empty table");
  const double X = std::isfinite(table.horizon()) ? table.horizon() : table.xs().back();
  const double x0 = std::max(table.xs().front(), 1.0 + 1e-9);
  if (std::log10(X / x0) < 3 - 1e-9) throw DomainError("residual_exponent: table must span at least 3 decades");

  ResidualFit fit;
  fit.grid = log_grid(x0, X, opt.points_per_decade);
  fit.residuals.resize(fit.grid.size());
  fit.running_max.resize(fit.grid.size());
  const auto& xs = table.xs();
  const auto& cum = table.cumulative();
  double run = 0;
  std::size_t e = 0;
  for (std::size_t g = 0; g < fit.grid.size(); ++g) {
    const double x = fit.grid[g];
    for (; e < xs.size() && xs[e] <= x; ++e) {
      const double m = model(xs[e]);
      run = std::max({run, std::abs(cum[e] - m), std::abs((e ? cum[e - 1] : 0.0) - m)});
    }
    fit.residuals[g] = std::abs(table.query(x) - model(x));
    run = std::max(run, fit.residuals[g]);
    fit.running_max[g] = run;
  }

  fit.window_hi = opt.window_hi > 0 ? opt.window_hi : X;
  fit.window_lo = opt.window_lo > 0 ? opt.window_lo : std::sqrt(X);
  if (std::log10(fit.window_hi / fit.window_lo) < 2) fit.window_lo = fit.window_hi / 100.0;
  fit.window_lo = std::max(fit.window_lo, x0);

  std::vector<double> lx, ly;
  bool any = false;
  for (std::size_t g = 0; g < fit.grid.size(); ++g) {
    if (fit.grid[g] < fit.window_lo * (1 - 1e-12) || fit.grid[g] > fit.window_hi * (1 + 1e-12)) continue;
    if (fit.running_max[g] > 0) {
      any = true;
      lx.push_back(std::log(fit.grid[g]));
      ly.push_back(std::log(fit.running_max[g]));
    }
  }
  fit.n_points = lx.size();
  if (!any) {
    fit.exponent = -std::numeric_limits<double>::infinity();
    return fit;
  }
  if (lx.size() < 3) throw DomainError("residual_exponent: fewer than 3 positive points in the window");
  const auto lf = least_squares(lx, ly);
  fit.exponent = lf.slope;
  fit.stderr_exponent = lf.stderr_slope;
  return fit;
}

/// Slope of log table(x) against log x at events in [sqrt(X), X].
inline double growth_exponent(const StepTable& table) {
  const double X = std::isfinite(table.horizon()) ? table.horizon() : (table.empty() ? 1.0 : table.xs().back());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double x = table.xs()[i], c = table.cumulative()[i];
    if (x >= std::sqrt(X) && x > 1 && c > 0) {
      lx.push_back(std::log(x));
      ly.push_back(std::log(c));
    }
  }
  if (lx.size() < 2 || lx.front() == lx.back()) return 1.0;
  return std::max(0.0, least_squares(lx, ly).slope);
}

/// Mean of table(x)/x over the top decade of the table.
inline double density_top_decade(const StepTable& table, int points = 200) {
  const double X = table.horizon();
  if (!std::isfinite(X)) throw DomainError("density_top_decade: table needs a finite horizon");
  CompensatedSum<double> s;
  for (double x : log_grid(X / 10, X, points)) s += table.query(x) / x;
  return s.value() / static_cast<double>(log_grid(X / 10, X, points).size());
}

// ---------------------------------------------------------------------------
// Mellin-Stieltjes values

struct MellinValue {
  cplx s;
  cplx value;
  double truncation_bound = 0;
};

/// max pi(x) log x / x over the events >= 3 (Chebyshev-type constant).
inline double chebyshev_constant(const GenPrimes& primes) {
  double c = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double x = primes.values[i];
    if (x >= 3) c = std::max(c, static_cast<double>(i + 1) * std::log(x) / x);
  }
  return c;
}

/// sum over p <= X of -log(1 - p^{-s}). A system complete only up to its
/// horizon gets the tail bound sigma C X^{1-sigma} / ((sigma-1) log X) /
/// (1 - X^{-sigma}) with C = chebyshev_constant.
inline MellinValue euler_log_zeta(const GenPrimes& primes, cplx s, double X) {
  const double sigma = s.real();
  const double Xc = std::min(X, primes.horizon);
  const bool finite = primes.finite_system() && X >= (primes.empty() ? 0.0 : primes.values.back());
  if (!(sigma > (finite ? 0.0 : 1.0)))
    throw DomainError("euler_log_zeta: Re s must exceed the abscissa of convergence");
  MellinValue mv;
  mv.s = s;
  CompensatedSum<cplx> acc;
  for (double p : primes.values) {
    if (p > Xc) break;
    acc += -std::log(1.0 - std::exp(-s * std::log(p)));
  }
  mv.value = acc.value();
  if (!finite) {
    const double C = std::max(chebyshev_constant(primes), 1.0);
    mv.truncation_bound =
        sigma * C * std::pow(Xc, 1 - sigma) / ((sigma - 1) * std::log(Xc)) / (1 - std::pow(Xc, -sigma));
  }
  return mv;
}

/// sum over events of weight * n^{-s}, with tail bound
/// N(X) X^{-sigma} (1 + |s| / (sigma - theta)), theta the growth exponent.
inline MellinValue dirichlet_sum(const StepTable& table, cplx s) {
  const double sigma = s.real();
  MellinValue mv;
  mv.s = s;
  CompensatedSum<cplx> acc;
  for (std::size_t i = 0; i < table.size(); ++i)
    acc += table.increments()[i] * std::exp(-s * std::log(table.xs()[i]));
  mv.value = acc.value();
  if (std::isfinite(table.horizon())) {
    const double theta = growth_exponent(table);
    if (!(sigma > theta)) throw DomainError("dirichlet_sum: Re s not above the growth exponent");
    const double X = table.horizon();
    mv.truncation_bound = std::abs(table.query(X)) * std::pow(X, -sigma) * (1 + std::abs(s) / (sigma - theta));
  }
  return mv;
}

// ---------------------------------------------------------------------------
// E(s) and Z(s)

/// E(s) = s/(s-1) prod_S (s/(s-w)) prod_R ((s-r)/s) (s/(s-delta))^M.
inline cplx E_factor(const PrescriptionSpec& spec, int M, cplx s) {
  if (s == cplx(1.0) || spec.S.multiplicity(s) > 0 || (M > 0 && s == cplx(spec.delta)) || s == cplx(0.0))
    throw PoleError("E_factor: s is a pole");
  cplx e = s / (s - 1.0);
  for (const auto& en : spec.S.entries()) e *= std::pow(s / (s - en.value), en.multiplicity);
  for (const auto& en : spec.R.entries()) e *= std::pow((s - en.value) / s, en.multiplicity);
  if (M > 0) e *= std::pow(s / (s - spec.delta), M);
  return e;
}
inline cplx E_factor(const PrescriptionSpec& spec, cplx s) {
  return E_factor(spec, spec.M ? *spec.M : certify_prescription(spec).M, s);
}

/// 1/E(s); vanishes exactly on {1} u S u {delta if M > 0}.
inline cplx E_reciprocal(const PrescriptionSpec& spec, int M, cplx s) {
  if (s == cplx(0.0) || spec.R.multiplicity(s) > 0) throw PoleError("E_reciprocal: s is a zero of E");
  cplx e = (s - 1.0) / s;
  for (const auto& en : spec.S.entries()) e *= std::pow((s - en.value) / s, en.multiplicity);
  for (const auto& en : spec.R.entries()) e *= std::pow(s / (s - en.value), en.multiplicity);
  if (M > 0) e *= std::pow((s - spec.delta) / s, M);
  return e;
}

/// exp of the Mellin transform of dG, for Re s > 1.
inline cplx E_from_mellin(const PrescriptionSpec& spec, int M, cplx s) {
  cplx l = mellin_dLi(s, 1.0);
  for (const auto& en : spec.S.entries()) l += static_cast<double>(en.multiplicity) * mellin_dLi(s, en.value);
  for (const auto& en : spec.R.entries()) l -= static_cast<double>(en.multiplicity) * mellin_dLi(s, en.value);
  if (M > 0) l += static_cast<double>(M) * mellin_dLi(s, spec.delta);
  return std::exp(l);
}

struct ZeroPoleAudit {
  double max_abs_at_zeros = 0;        // |E(r)| over r in R
  double max_reciprocal_at_poles = 0; // |1/E(w)| over w in {1} u S u {delta}
  bool passed(double tol = 1e-10) const { return max_abs_at_zeros <= tol && max_reciprocal_at_poles <= tol; }
};

inline ZeroPoleAudit audit_E(const PrescriptionSpec& spec, int M) {
  ZeroPoleAudit a;
  for (const auto& en : spec.R.entries())
    a.max_abs_at_zeros = std::max(a.max_abs_at_zeros, std::abs(E_factor(spec, M, en.value)));
  std::vector<cplx> poles{1.0};
  for (const auto& en : spec.S.entries()) poles.push_back(en.value);
  if (M > 0) poles.push_back(spec.delta);
  for (cplx w : poles) a.max_reciprocal_at_poles = std::max(a.max_reciprocal_at_poles, std::abs(E_reciprocal(spec, M, w)));
  return a;
}

/// (z, coefficient) pairs of G: 1 for z = 1, +m on S, -m on R, M at delta.
inline std::vector<std::pair<cplx, double>> G_exponents(const PrescriptionSpec& spec, int M) {
  std::vector<std::pair<cplx, double>> t{{1.0, 1.0}};
  for (const auto& en : spec.S.entries()) t.push_back({en.value, static_cast<double>(en.multiplicity)});
  for (const auto& en : spec.R.entries()) t.push_back({en.value, -static_cast<double>(en.multiplicity)});
  if (M > 0) t.push_back({spec.delta, static_cast<double>(M)});
  return t;
}

/// Z_X(s) = int_1^X x^{-s} d(Pi_P - G): both sides truncated at X.
inline cplx Z_truncated(const GenPrimes& primes, const PrescriptionSpec& spec, int M, cplx s, double X) {
  CompensatedSum<cplx> acc;
  for (double p : primes.values) {
    if (p > X) break;
    const double lp = std::log(p);
    double pk = lp;
    for (int k = 1; pk <= std::log(X) * (1 + 1e-15); ++k, pk += lp) acc += std::exp(-s * pk) / static_cast<double>(k);
  }
  const double L = std::log(X);
  for (const auto& [z, c] : G_exponents(spec, M)) acc += -c * mellin_dLi_truncated(s, z, L);
  return acc.value();
}

struct ZPoint {
  cplx s;
  cplx Z;
  double bound_ratio;
};

inline double Z_rhs(cplx s) {
  const double sg = s.real();
  return sg / (sg - 0.5) + sg * std::sqrt(std::log(std::abs(s.imag()) + 1.0) / (sg - 0.5));
}

/// Z on a grid of s with |Z| / (sigma/(sigma-1/2) + sigma sqrt(log(|t|+1)/(sigma-1/2))).
inline std::vector<ZPoint> Z_deviation(const GenPrimes& primes, const PrescriptionSpec& spec, int M,
                                       const std::vector<cplx>& s_grid, double X, double margin = 0.05,
                                       unsigned threads = 1) {
  for (cplx s : s_grid)
    if (!(s.real() >= 0.5 + margin - 1e-12)) throw DomainError("Z_deviation: Re s must be at least 1/2 + margin");
  std::vector<ZPoint> out(s_grid.size());
  parallel_for(
      s_grid.size(), threads,
      [&](std::size_t i) {
        const cplx z = Z_truncated(primes, spec, M, s_grid[i], X);
        out[i] = {s_grid[i], z, std::abs(z) / Z_rhs(s_grid[i])};
      },
      1);
  return out;
}

/// Residue of the zeta function of a region-I system at s = 1:
/// (1/(1-w))^m ... (1-r)^m ... (1-delta)^{-M} exp(Z_X(1)).
inline double density_by_residue(const GenPrimes& primes, const PrescriptionSpec& spec, int M, double X) {
  cplx r = 1.0;
  for (const auto& en : spec.S.entries()) r *= std::pow(1.0 / (1.0 - en.value), en.multiplicity);
  for (const auto& en : spec.R.entries()) r *= std::pow(1.0 - en.value, en.multiplicity);
  if (M > 0) r *= std::pow(1.0 - spec.delta, -M);
  return (r * std::exp(Z_truncated(primes, spec, M, 1.0, X))).real();
}

/// psi main terms x + sum_S x^w/w - sum_R x^r/r + M x^delta/delta (x - 1
/// style constants dropped).
inline std::function<double(double)> psi_model(const PrescriptionSpec& spec, int M) {
  auto t = G_exponents(spec, M);
  return [t](double x) {
    double v = 0;
    for (const auto& [z, c] : t) v += c * (std::pow(cplx(x), z) / z).real();
    return v;
  };
}

// ---------------------------------------------------------------------------
// Oscillatory family

/// eta_l(s) = int x^{-s} dR_l(x); `l` is 1-based.
inline cplx eta_l(const OscillatorySpec& spec, std::size_t l, cplx s) {
  if (l < 1 || l > spec.blocks()) throw DomainError("eta_l: block index out of range");
  const std::size_t i = l - 1;
  const double tau = spec.tau[i], b = spec.beta;
  const cplx d1 = s + 1.0 - b - cplx(0, tau), d2 = s + 1.0 - b + cplx(0, tau);
  if (std::abs(d1) == 0 || std::abs(d2) == 0) throw PoleError("eta_l: pole at s = beta - 1 +- i tau");
  const cplx e = b - 1.0 - s;
  return tau / 2.0 * (std::exp(e * spec.log_A(i)) - std::exp(e * spec.log_B(i))) * (1.0 / d1 + 1.0 / d2);
}

/// log|zeta_C(s)| = log|(s - alpha)/(s - 1)| + Re sum_l eta_l(s).
inline double log_abs_zeta_C(const OscillatorySpec& spec, cplx s) {
  double v = std::log(std::abs((s - spec.alpha) / (s - 1.0)));
  for (std::size_t l = 1; l <= spec.blocks(); ++l) v += eta_l(spec, l, s).real();
  return v;
}

/// tau^{(1+delta)(beta-sigma)-delta} / (2(1+sigma-beta)) for block l0.
inline double zeta_C_growth_prediction(const OscillatorySpec& spec, double sigma, std::size_t l0) {
  const std::size_t i = l0 - 1;
  const double d = spec.delta[i];
  return std::pow(spec.tau[i], (1 + d) * (spec.beta - sigma) - d) / (2 * (1 + sigma - spec.beta));
}

/// Ratio of log|zeta_C(sigma + i tau_{l0})| to the predicted growth.
inline double zeta_C_growth(const OscillatorySpec& spec, double sigma, std::size_t l0) {
  if (!(sigma > 0 && sigma < spec.beta)) throw DomainError("zeta_C_growth: sigma must lie in (0, beta)");
  if (l0 < 1 || l0 > spec.blocks()) throw DomainError("zeta_C_growth: l0 out of range");
  return log_abs_zeta_C(spec, cplx(sigma, spec.tau[l0 - 1])) / zeta_C_growth_prediction(spec, sigma, l0);
}

// ---------------------------------------------------------------------------
// Subtractive family

/// zeta_S(s) = zeta(s + 1 - alpha) exp(H_X(s)) with
/// H_X(s) = sum_{P_S} sum_k p^{-ks}/k - sum_{p <= X} sum_k p^{-k(s+1-alpha)}/k,
/// both sums over p^k <= X. Valid for Re s > alpha/2; the bound is the size of
/// the last decade's contribution to H_X.
inline MellinValue zeta_subtractive(const GenPrimes& P_S, const GenPrimes& classical, double alpha, cplx s) {
  if (!(s.real() > alpha / 2)) throw DomainError("zeta_subtractive: need Re s > alpha/2");
  const double X = std::min(P_S.horizon, classical.horizon);
  if (!std::isfinite(X)) throw DomainError("zeta_subtractive: needs a finite horizon");
  const double LX = std::log(X);
  auto H = [&](double upto) {
    CompensatedSum<cplx> acc;
    const double Lu = std::log(upto);
    for (double p : P_S.values) {
      if (p > upto) break;
      const double lp = std::log(p);
      for (int k = 1; k * lp <= Lu * (1 + 1e-15); ++k) acc += std::exp(-s * (k * lp)) / static_cast<double>(k);
    }
    const cplx w = s + 1.0 - alpha;
    for (double p : classical.values) {
      if (p > upto) break;
      const double lp = std::log(p);
      for (int k = 1; k * lp <= Lu * (1 + 1e-15); ++k) acc += -std::exp(-w * (k * lp)) / static_cast<double>(k);
    }
    return acc.value();
  };
  const cplx h = H(X);
  MellinValue mv;
  mv.s = s;
  mv.value = zeta_eval(s + 1.0 - alpha) * std::exp(h);
  mv.truncation_bound = std::abs(mv.value) * std::abs(std::expm1(std::abs(h - H(std::exp(LX - std::log(10.0))))));
  return mv;
}

// ---------------------------------------------------------------------------
// Constants of the hyperbola lemma

struct Extrapolation {
  double value = 0;
  double error = 0;
};

/// lim_R (sum_{n<=R} a_n n^{-beta} - a R^{1-beta}/(1-beta)), one Richardson
/// step for the R^{-beta} term at R = X/4.
inline Extrapolation I_beta(const StepTable& table, double a, double beta) {
  if (!(beta > 0 && beta < 1)) throw DomainError("I_beta: beta must lie in (0,1)");
  const double X = table.horizon();
  if (!std::isfinite(X)) throw DomainError("I_beta: table needs a finite horizon");
  const double R = std::floor(X / 4);
  std::vector<double> marks{R, 2 * R, 4 * R};
  std::vector<double> g;
  CompensatedSum<double> acc;
  std::size_t i = 0;
  for (double m : marks) {
    for (; i < table.size() && table.xs()[i] <= m; ++i) acc += table.increments()[i] * std::pow(table.xs()[i], -beta);
    g.push_back(acc.value() - a * std::pow(m, 1 - beta) / (1 - beta));
  }
  const double c = std::pow(2.0, beta);
  const double e1 = (c * g[1] - g[0]) / (c - 1), e2 = (c * g[2] - g[1]) / (c - 1);
  if (!std::isfinite(e2)) throw TruncationError("I_beta: non-finite extrapolation");
  return {e2, std::abs(e2 - e1)};
}

/// H(1) = sum h(l)/l with tail L(R)/R * b/(1-b), b the growth exponent of L.
inline Extrapolation H_one(const StepTable& L_tab) {
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < L_tab.size(); ++i) acc += L_tab.increments()[i] / L_tab.xs()[i];
  Extrapolation r{acc.value(), 0};
  if (L_tab.empty() || !std::isfinite(L_tab.horizon())) return r;
  const double b = growth_exponent(L_tab);
  if (b >= 1) throw DomainError("H_one: weights not summable against 1/l");
  const double R = L_tab.horizon();
  const double tail = L_tab.query(R) / R * b / (1 - b);
  r.value += tail;
  r.error = std::abs(tail);
  return r;
}

}  // namespace beurling
