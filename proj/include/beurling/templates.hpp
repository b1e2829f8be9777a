#pragma once

// Template prime-counting functions: the prescription family F, G; the
// oscillatory family Pi_C, pi_C; the subtractive atomic family.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/gen_primes.hpp"
#include "beurling/logint.hpp"
#include "beurling/multiset.hpp"
#include "beurling/numeric.hpp"
#include "beurling/template_fn.hpp"

namespace beurling {

// ---------------------------------------------------------------------------
// Prescription family

struct PrescriptionSpec {
  ComplexMultiset S;  // poles omega
  ComplexMultiset R;  // zeros rho
  double delta = 0.25;
  std::optional<int> M;  // empty: choose the smallest certifiable M
  double x_max = 1e8;

  void validate() const {
    if (!(delta > 0 && delta < 0.5)) throw DomainError("PrescriptionSpec: delta must lie in (0, 1/2)");
    if (!S.disjoint_from(R)) throw DomainError("PrescriptionSpec: S and R must be disjoint");
    if (M && *M < 0) throw DomainError("PrescriptionSpec: M must be non-negative");
    if (!(x_max > 1)) throw DomainError("PrescriptionSpec: x_max must exceed 1");
  }

  std::string id(int m) const {
    std::ostringstream os;
    os.precision(17);
    os << "prescription;S=";
    for (const auto& e : S.entries()) os << e.value << '^' << e.multiplicity << ',';
    os << ";R=";
    for (const auto& e : R.entries()) os << e.value << '^' << e.multiplicity << ',';
    os << ";delta=" << delta << ";M=" << m << ";xmax=" << x_max;
    return os.str();
  }
};

/// Outcome of the positivity check for x log x F'(x).
struct PositivityCertificate {
  int M = 0;
  double x0 = 0;            // explicit lower bound is positive on [x0, 1e40]
  double grid_lo = 0;       // grid checked on [grid_lo, grid_hi] at ratio 1.001
  double grid_hi = 0;
  std::size_t grid_points = 0;
  double min_value = 0;     // smallest x log x F'(x) seen on the grid
  double min_at = 0;
};

namespace detail {

struct WeightedExponent {
  cplx z;
  double weight;
};

inline std::vector<WeightedExponent> prescription_terms(const PrescriptionSpec& spec) {
  std::vector<WeightedExponent> t{{1.0, 1.0}};
  for (auto [z, w] : spec.S.folded()) t.push_back({z, w});
  for (auto [z, w] : spec.R.folded()) t.push_back({z, -w});
  return t;
}

inline double sum_li(const std::vector<WeightedExponent>& terms, double t) {
  double s = 0;
  for (const auto& e : terms) s += e.weight * li_pow_log(t, e.z).real();
  return s;
}
inline double sum_li_deriv(const std::vector<WeightedExponent>& terms, double t) {
  double s = 0;
  for (const auto& e : terms) s += e.weight * li_pow_xlogx_deriv_log(t, e.z).real();
  return s;
}
inline double sum_Li(const std::vector<WeightedExponent>& terms, double t) {
  double s = 0;
  for (const auto& e : terms) s += e.weight * Li_pow_log(t, e.z).real();
  return s;
}
inline double sum_Li_deriv(const std::vector<WeightedExponent>& terms, double t) {
  double s = 0;
  for (const auto& e : terms) s += e.weight * Li_pow_xlogx_deriv_log(t, e.z).real();
  return s;
}

inline double harmonic(long n) {
  double h = 0;
  for (long k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return h;
}

}  // namespace detail

/// Explicit version of the bound in the monotonicity lemma. For |z| <= Q and
/// 0 < Re z <= 1,
///   |x log x (li(x^z))' - (x^z - 1)| <= sum_{k>=2} |x^{z/k} - 1| / k <= B(x),
///   B(x) = 2 sqrt(x) (H_{K0} - 1) + 2 Q log x / max(K0, 1),  K0 = floor(Q log x),
/// using |x^{z/k} - 1| <= 2 sqrt(x) for k <= K0 and <= 2|z| log x / k beyond.
/// Summing over the L + 1 terms of F0 gives
///   x log x F0'(x) >= (x - 1) - L (x^q + 1) - (L + 1) B(x).
struct MonotonicityBound {
  double Q;
  int L;
  double q;

  static MonotonicityBound from(const PrescriptionSpec& spec) {
    MonotonicityBound b;
    b.Q = std::max({1.0, spec.S.max_abs(), spec.R.max_abs()});
    b.L = spec.S.size() + spec.R.size();
    b.q = b.L == 0 ? 0.0 : std::max(spec.S.empty() ? 0.0 : spec.S.max_real(), spec.R.empty() ? 0.0 : spec.R.max_real());
    return b;
  }

  double remainder(double x) const { return remainder_cell(x, x); }

  /// Upper bound for B on the cell [a, b].
  double remainder_cell(double a, double b) const {
    const long k_hi = static_cast<long>(std::floor(Q * std::log(b)));
    const long k_lo = static_cast<long>(std::floor(Q * std::log(a)));
    const double head = k_hi >= 2 ? 2.0 * std::sqrt(b) * (detail::harmonic(k_hi) - 1.0) : 0.0;
    return head + 2.0 * Q * std::log(b) / static_cast<double>(std::max(k_lo, 1L));
  }

  /// Lower bound of x log x F0'(x) valid on all of [a, b].
  double lower_cell(double a, double b) const {
    return (a - 1.0) - L * (std::pow(b, q) + 1.0) - (L + 1) * remainder_cell(a, b);
  }
  double lower(double x) const { return lower_cell(x, x); }

  /// Smallest cell endpoint x0 on a ratio-1.01 grid such that every cell in
  /// [x0, 1e40] has a positive lower bound.
  double threshold() const {
    const auto g = geometric_grid(1.0 + 1e-6, 1e40, 1.01);
    double x0 = g.front();
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
      if (lower_cell(g[i], g[i + 1]) <= 0) x0 = g[i + 1];
    if (x0 >= 1e40) throw CertificationError("prescription: explicit lower bound never becomes positive", x0);
    return x0;
  }
};

/// Finds (or checks) M so that x log x F'(x) > 0 on the grid up to x0.
inline PositivityCertificate certify_prescription(const PrescriptionSpec& spec) {
  spec.validate();
  const auto terms = detail::prescription_terms(spec);
  const auto bound = MonotonicityBound::from(spec);
  PositivityCertificate cert;
  cert.x0 = bound.threshold();
  cert.grid_lo = 1.0 + 1e-6;
  cert.grid_hi = std::max(cert.x0, cert.grid_lo * 1.001);
  const auto grid = geometric_grid(cert.grid_lo, cert.grid_hi, 1.001);
  cert.grid_points = grid.size();

  std::vector<double> d0(grid.size()), dd(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = std::log(grid[i]);
    d0[i] = detail::sum_li_deriv(terms, t);
    dd[i] = li_pow_xlogx_deriv_log(t, spec.delta).real();
  }

  int M = 0;
  if (spec.M) {
    M = *spec.M;
  } else {
    double worst_x = 0;
    double need = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (d0[i] > 0) continue;
      const double m = std::floor(-d0[i] / dd[i]) + 1.0;
      if (m > need) {
        need = m;
        worst_x = grid[i];
      }
    }
    if (need > 1e6) throw CertificationError("prescription: auto search for M exceeds 1e6", worst_x);
    M = static_cast<int>(need);
  }

  cert.M = M;
  cert.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = d0[i] + M * dd[i];
    if (v < cert.min_value) {
      cert.min_value = v;
      cert.min_at = grid[i];
    }
    if (!(v > 0)) throw CertificationError("prescription: F' not positive for the given M", grid[i]);
  }
  return cert;
}

/// F(x) = li(x) + sum_S li(x^w) - sum_R li(x^r) + M li(x^delta).
inline TemplateFn make_prescription_F(const PrescriptionSpec& spec, PositivityCertificate* cert_out = nullptr) {
  const auto cert = certify_prescription(spec);
  if (cert_out) *cert_out = cert;
  auto terms = detail::prescription_terms(spec);
  if (cert.M > 0) terms.push_back({spec.delta, static_cast<double>(cert.M)});
  return TemplateFn::continuous(spec.id(cert.M), spec.x_max,
                                {[terms](double t) { return detail::sum_li(terms, t); },
                                 [terms](double t) { return detail::sum_li_deriv(terms, t); }});
}

/// G(x) = Li(x) + sum_S Li(x^w) - sum_R Li(x^r) + M Li(x^delta); M is taken
/// from the certificate when the spec leaves it open.
inline TemplateFn make_prescription_G(const PrescriptionSpec& spec) {
  spec.validate();
  const int M = spec.M ? *spec.M : certify_prescription(spec).M;
  auto terms = detail::prescription_terms(spec);
  if (M > 0) terms.push_back({spec.delta, static_cast<double>(M)});
  return TemplateFn::continuous("G:" + spec.id(M), spec.x_max,
                                {[terms](double t) { return detail::sum_Li(terms, t); },
                                 [terms](double t) { return detail::sum_Li_deriv(terms, t); }});
}

// ---------------------------------------------------------------------------
// Oscillatory family

struct OscillatorySpec {
  double alpha = 0.3;
  double beta = 0.7;
  std::vector<double> tau;
  std::vector<double> delta;
  std::vector<double> nu;
  double x_max = 1e8;

  std::size_t blocks() const { return tau.size(); }
  double A(std::size_t l) const { return std::pow(tau[l], 1.0 + delta[l]); }
  double B(std::size_t l) const { return std::pow(tau[l], nu[l]); }
  double log_A(std::size_t l) const { return (1.0 + delta[l]) * std::log(tau[l]); }
  double log_B(std::size_t l) const { return nu[l] * std::log(tau[l]); }

  /// Blocks with B_l <= X.
  int full_blocks_below(double X) const {
    int n = 0;
    for (std::size_t l = 0; l < blocks(); ++l)
      if (B(l) <= X) ++n;
    return n;
  }

  /// Moves delta_l and nu_l to the nearest values with tau log A and
  /// tau log B in 2 pi Z, keeping delta > 0 and nu in [2, 3].
  void adjust_to_lattice() {
    for (std::size_t l = 0; l < blocks(); ++l) {
      const double step = 2.0 * kPi / (tau[l] * std::log(tau[l]));
      if (step < 1e-12) continue;  // lattice finer than double resolution
      double m = std::round((1.0 + delta[l]) / step);
      while (m * step - 1.0 <= 0) m += 1;
      delta[l] = m * step - 1.0;
      m = std::round(nu[l] / step);
      if (m * step < 2.0) m = std::ceil(2.0 / step);
      if (m * step > 3.0) m = std::floor(3.0 / step);
      nu[l] = m * step;
    }
  }

  void validate() const {
    if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1)) throw DomainError("OscillatorySpec: alpha, beta must lie in (0,1)");
    if (!(beta > alpha && beta > 0.5)) throw DomainError("OscillatorySpec: need beta > alpha and beta > 1/2");
    if (tau.empty() || delta.size() != tau.size() || nu.size() != tau.size())
      throw DomainError("OscillatorySpec: tau, delta, nu must be non-empty and of equal length");
    for (std::size_t l = 0; l < blocks(); ++l) {
      if (!(tau[l] > 1)) throw DomainError("OscillatorySpec: tau must exceed 1");
      if (l > 0 && !(tau[l] > tau[l - 1])) throw DomainError("OscillatorySpec: tau must increase");
      if (!(delta[l] > 0)) throw DomainError("OscillatorySpec: delta must be positive");
      if (!(nu[l] >= 2 - 1e-12 && nu[l] <= 3 + 1e-12)) throw DomainError("OscillatorySpec: nu must lie in [2, 3]");
      if (!(1 + delta[l] < nu[l])) throw DomainError("OscillatorySpec: need A_l < B_l");
      if (l + 1 < blocks() && !(log_B(l) < log_A(l + 1))) throw DomainError("OscillatorySpec: need B_l < A_{l+1}");
    }
  }

  /// Desk defaults: tau_1 = 20, tau_{l+1} = tau_l^2, delta_l = 1/(l+2),
  /// nu_l = 2, then moved onto the lattice.
  static OscillatorySpec desk(double alpha, double beta, int blocks = 6, double tau1 = 20.0) {
    OscillatorySpec s;
    s.alpha = alpha;
    s.beta = beta;
    double t = tau1;
    for (int l = 1; l <= blocks; ++l) {
      s.tau.push_back(t);
      s.delta.push_back(1.0 / (l + 2));
      s.nu.push_back(2.0);
      t = t * t;
    }
    s.adjust_to_lattice();
    s.validate();
    return s;
  }

  std::string id(const char* which) const {
    std::ostringstream os;
    os.precision(17);
    os << which << ";alpha=" << alpha << ";beta=" << beta << ";tau=";
    for (std::size_t l = 0; l < blocks(); ++l) os << tau[l] << '/' << delta[l] << '/' << nu[l] << ',';
    os << ";xmax=" << x_max;
    return os.str();
  }

  /// Largest tau among blocks that start below x_max.
  double active_frequency() const {
    double w = 0;
    for (std::size_t l = 0; l < blocks(); ++l)
      if (log_A(l) <= std::log(x_max)) w = tau[l];
    return w;
  }

  /// R_l(x) from log x.
  double R_log(std::size_t l, double t) const {
    const double la = log_A(l), lb = log_B(l);
    if (t <= la) return 0.0;
    const double tt = std::min(t, lb);
    const double tl = tau[l], b1 = 1.0 - beta;
    const double xb = std::exp(-b1 * tt);  // x^{beta-1}
    const double c = std::cos(tl * tt), s = std::sin(tl * tt);
    return tl / (b1 * b1 + tl * tl) * (b1 * (std::exp(-b1 * la) - xb * c) + tl * xb * s);
  }
  double R_log_limit(std::size_t l) const { return R_log(l, log_B(l)); }

  /// dR_l/dx times x log x at x = e^t (zero outside [A_l, B_l)).
  double R_xlogx_deriv_log(std::size_t l, double t) const {
    if (t < log_A(l) || t >= log_B(l)) return 0.0;
    return t * tau[l] * std::cos(tau[l] * t) * std::exp((beta - 1.0) * t);
  }
  /// Largest possible |x log x dR_l/dx| at x = e^t.
  double R_xlogx_amplitude_log(std::size_t l, double t) const {
    if (t < log_A(l) || t >= log_B(l)) return 0.0;
    return t * tau[l] * std::exp((beta - 1.0) * t);
  }
};

/// Monotonicity check of an oscillatory template: the derivative with the
/// cosine factors replaced by -1 must stay positive on a ratio-1.001 grid.
struct OscillatoryCertificate {
  double grid_lo = 0, grid_hi = 0;
  std::size_t grid_points = 0;
  double min_margin = 0;  // min of the worst-case x log x F'(x)
  double min_at = 0;
};

namespace detail {

template <typename Smooth, typename Amplitude>
OscillatoryCertificate certify_oscillatory(const OscillatorySpec& spec, Smooth smooth, Amplitude amplitude,
                                           const char* who) {
  OscillatoryCertificate c;
  c.grid_lo = 1.0 + 1e-6;
  c.grid_hi = spec.x_max;
  const auto grid = geometric_grid(c.grid_lo, c.grid_hi, 1.001);
  c.grid_points = grid.size();
  c.min_margin = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double t = std::log(x);
    const double v = smooth(t) - amplitude(t);
    if (v < c.min_margin) {
      c.min_margin = v;
      c.min_at = x;
    }
    if (!(v > 0)) throw CertificationError(std::string(who) + ": monotonicity grid check fails", x);
  }
  return c;
}

inline int max_moebius_k(const OscillatorySpec& spec, double t) {
  return static_cast<int>(std::floor(t / spec.log_A(0)));
}

}  // namespace detail

inline OscillatoryCertificate certify_oscillatory_Pi_C(const OscillatorySpec& spec) {
  spec.validate();
  return detail::certify_oscillatory(
      spec, [&](double t) { return std::expm1(t) - std::expm1(spec.alpha * t); },
      [&](double t) {
        double a = 0;
        for (std::size_t l = 0; l < spec.blocks(); ++l) a += spec.R_xlogx_amplitude_log(l, t);
        return a;
      },
      "Pi_C");
}

inline OscillatoryCertificate certify_oscillatory_pi_C(const OscillatorySpec& spec) {
  spec.validate();
  return detail::certify_oscillatory(
      spec,
      [&](double t) {
        return li_pow_xlogx_deriv_log(t, 1.0).real() - li_pow_xlogx_deriv_log(t, spec.alpha).real();
      },
      [&](double t) {
        // x log x r'_{l,k}(x) = mu(k)/k * (x^{1/k} log x^{1/k}) R_l'(x^{1/k})
        double a = 0;
        const int kmax = detail::max_moebius_k(spec, t);
        for (int k = 1; k <= kmax; ++k) {
          if (moebius(static_cast<std::uint64_t>(k)) == 0) continue;
          for (std::size_t l = 0; l < spec.blocks(); ++l) a += spec.R_xlogx_amplitude_log(l, t / k) / k;
        }
        return a;
      },
      "pi_C");
}

/// Pi_C(x) = Li(x) - Li(x^alpha) + sum_l R_l(x).
inline TemplateFn make_oscillatory_Pi_C(const OscillatorySpec& spec, OscillatoryCertificate* cert = nullptr) {
  const auto c = certify_oscillatory_Pi_C(spec);
  if (cert) *cert = c;
  auto f = TemplateFn::continuous(
      spec.id("Pi_C"), spec.x_max,
      {[spec](double t) {
         double v = Li_pow_log(t, 1.0).real() - Li_pow_log(t, spec.alpha).real();
         for (std::size_t l = 0; l < spec.blocks(); ++l) v += spec.R_log(l, t);
         return v;
       },
       [spec](double t) {
         double v = std::expm1(t) - std::expm1(spec.alpha * t);
         for (std::size_t l = 0; l < spec.blocks(); ++l) v += spec.R_xlogx_deriv_log(l, t);
         return v;
       }});
  f.set_frequency(spec.active_frequency());
  return f;
}

/// pi_C(x) = li(x) - li(x^alpha) + sum_k sum_l mu(k)/k R_l(x^{1/k}).
inline TemplateFn make_oscillatory_pi_C(const OscillatorySpec& spec, OscillatoryCertificate* cert = nullptr) {
  const auto c = certify_oscillatory_pi_C(spec);
  if (cert) *cert = c;
  auto f = TemplateFn::continuous(
      spec.id("pi_C"), spec.x_max,
      {[spec](double t) {
         double v = li_pow_log(t, 1.0).real() - li_pow_log(t, spec.alpha).real();
         const int kmax = detail::max_moebius_k(spec, t);
         for (int k = 1; k <= kmax; ++k) {
           const int mu = moebius(static_cast<std::uint64_t>(k));
           if (mu == 0) continue;
           for (std::size_t l = 0; l < spec.blocks(); ++l) v += mu * spec.R_log(l, t / k) / k;
         }
         return v;
       },
       [spec](double t) {
         double v = li_pow_xlogx_deriv_log(t, 1.0).real() - li_pow_xlogx_deriv_log(t, spec.alpha).real();
         const int kmax = detail::max_moebius_k(spec, t);
         for (int k = 1; k <= kmax; ++k) {
           const int mu = moebius(static_cast<std::uint64_t>(k));
           if (mu == 0) continue;
           for (std::size_t l = 0; l < spec.blocks(); ++l) v += mu * spec.R_xlogx_deriv_log(l, t / k) / k;
         }
         return v;
       }});
  f.set_frequency(spec.active_frequency());
  return f;
}

// ---------------------------------------------------------------------------
// Subtractive family

/// Raw cumulative sum_{p <= x} p^{alpha-1} at each prime, and the transfer
/// primes q_j (first prime where the raw sum reaches j), as indices.
struct SubtractiveLayout {
  std::vector<double> raw;
  std::vector<std::size_t> transfer;  // index of q_j, j = 1, 2, ...
};

inline SubtractiveLayout subtractive_layout(double alpha, const GenPrimes& primes) {
  SubtractiveLayout s;
  s.raw.reserve(primes.size());
  CompensatedSum<double> acc;
  double next = 1.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    acc += std::pow(primes.values[i], alpha - 1.0);
    s.raw.push_back(acc.value());
    if (s.raw.back() >= next) {
      s.transfer.push_back(i);
      next += 1.0;
    }
  }
  return s;
}

/// Atomic F with mass p^{alpha-1} at each prime; with the error measure the
/// excess over j at q_j moves to the next prime, so F(q_j) = j exactly.
inline TemplateFn make_subtractive_F(double alpha, const GenPrimes& primes, bool error_measure = true) {
  const double hi = error_measure ? 2.0 / 3.0 : 0.8;
  if (!(alpha > 0.5 && alpha < hi))
    throw DomainError(error_measure ? "make_subtractive_F: alpha must lie in (1/2, 2/3)"
                                    : "make_subtractive_F: alpha must lie in (1/2, 4/5)");
  primes.validate();
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes.provenance[i] != Provenance::Classical)
      throw DomainError("make_subtractive_F: expects the classical primes");
    if (i > 0 && primes.values[i] == primes.values[i - 1])
      throw DomainError("make_subtractive_F: primes must be distinct");
  }
  if (std::isinf(primes.horizon)) throw DomainError("make_subtractive_F: primes need a finite sieve bound");
  const auto lay = subtractive_layout(alpha, primes);
  if (lay.transfer.empty())
    throw DomainError("make_subtractive_F: X_max too small to contain the first transfer prime");
  std::vector<double> cum = lay.raw;
  if (error_measure)
    for (std::size_t j = 0; j < lay.transfer.size(); ++j) cum[lay.transfer[j]] = static_cast<double>(j + 1);
  std::ostringstream id;
  id.precision(17);
  id << "subtractive;alpha=" << alpha << ";dE=" << (error_measure ? 1 : 0) << ";xmax=" << primes.horizon;
  auto f = TemplateFn::atomic(id.str(), primes.values, std::move(cum), primes.horizon);
  f.set_deviation_exponent(alpha / 2.0);
  return f;
}

}  // namespace beurling
