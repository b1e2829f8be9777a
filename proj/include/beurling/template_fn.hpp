#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "beurling/errors.hpp"

namespace beurling {

enum class Support { Continuous, AtomsOnPrimes };

/// A non-decreasing function on [1, x_max] with F(1) = 0: either absolutely
/// continuous (given through t = log x) or a finite sum of point masses.
class TemplateFn {
 public:
  struct ContinuousParts {
    std::function<double(double)> value_log;        // t -> F(e^t)
    std::function<double(double)> xlogx_deriv_log;  // t -> x log x F'(x) at x = e^t
  };

  struct Atom {
    double x;
    double mass;
  };

  static TemplateFn continuous(std::string id, double x_max, ContinuousParts parts) {
    if (!(x_max > 1)) throw DomainError("TemplateFn: x_max must exceed 1");
    TemplateFn f;
    f.id_ = std::move(id);
    f.support_ = Support::Continuous;
    f.x_max_ = x_max;
    f.log_x_max_ = std::log(x_max);
    f.parts_ = std::make_shared<ContinuousParts>(std::move(parts));
    f.f_max_ = f.parts_->value_log(f.log_x_max_);
    return f;
  }

  /// Point masses at `locations` (strictly increasing) with the cumulative
  /// values given directly, so exact values such as integers survive.
  static TemplateFn atomic(std::string id, std::vector<double> locations, std::vector<double> cumulative,
                           double x_max) {
    if (locations.size() != cumulative.size()) throw DomainError("TemplateFn: atom/cumulative size mismatch");
    for (std::size_t i = 0; i < locations.size(); ++i) {
      if (!(locations[i] > 1)) throw DomainError("TemplateFn: atoms must lie above 1");
      if (i > 0 && !(locations[i] > locations[i - 1])) throw DomainError("TemplateFn: atoms must increase");
      const double prev = i > 0 ? cumulative[i - 1] : 0.0;
      if (cumulative[i] < prev) throw DomainError("TemplateFn: negative atom mass");
    }
    TemplateFn f;
    f.id_ = std::move(id);
    f.support_ = Support::AtomsOnPrimes;
    f.x_max_ = x_max;
    f.log_x_max_ = std::log(x_max);
    f.atoms_ = std::make_shared<std::vector<double>>(std::move(locations));
    f.cumulative_ = std::make_shared<std::vector<double>>(std::move(cumulative));
    f.f_max_ = f.eval(x_max);
    return f;
  }

  const std::string& id() const { return id_; }
  Support support() const { return support_; }
  bool is_atomic() const { return support_ == Support::AtomsOnPrimes; }
  double x_max() const { return x_max_; }
  double f_max() const { return f_max_; }

  /// Exponent e in the exponential-sum bound x^e + x^e sqrt(log(|t|+1)/log(x+1)).
  double deviation_exponent() const { return deviation_exponent_; }
  void set_deviation_exponent(double e) { deviation_exponent_ = e; }

  /// Largest angular frequency (in log x) present in dF; quadrature uses it.
  double frequency() const { return frequency_; }
  void set_frequency(double w) { frequency_ = w; }

  double eval(double x) const {
    if (!(x >= 1)) throw DomainError("TemplateFn::eval: requires x >= 1");
    if (x > x_max_ * (1 + 1e-15)) throw DomainError("TemplateFn::eval: x beyond the domain cap");
    if (is_atomic()) {
      const auto& a = *atoms_;
      const auto it = std::upper_bound(a.begin(), a.end(), x);
      return it == a.begin() ? 0.0 : (*cumulative_)[static_cast<std::size_t>(it - a.begin()) - 1];
    }
    return x == 1 ? 0.0 : parts_->value_log(std::log(x));
  }

  /// F(e^t); continuous templates only.
  double eval_log(double t) const {
    require_continuous("eval_log");
    return t == 0 ? 0.0 : parts_->value_log(t);
  }

  /// x log x F'(x) at x = e^t.
  double xlogx_deriv_log(double t) const {
    require_continuous("deriv");
    return parts_->xlogx_deriv_log(t);
  }

  /// dF/dx.
  double deriv(double x) const {
    require_continuous("deriv");
    if (!(x >= 1)) throw DomainError("TemplateFn::deriv: requires x >= 1");
    const double t = std::max(std::log(x), kTinyLog);
    return parts_->xlogx_deriv_log(t) / (std::exp(t) * t);
  }

  /// Smallest x with F(x) >= u (atomic) or F(x) = u (continuous).
  double inverse(double u) const {
    if (is_atomic()) return inverse_from(0.0, u);
    return std::exp(inverse_log(u, -1.0));
  }

  /// Atomic inverse at u = base + frac with the comparison done as
  /// F - base >= frac, which keeps frac's low bits when base is large.
  double inverse_from(double base, double frac) const {
    if (!is_atomic()) return inverse(base + frac);
    if (frac <= 0 && base == 0) return 1.0;
    const auto& c = *cumulative_;
    const auto it = std::lower_bound(c.begin(), c.end(), frac,
                                     [base](double cum, double f) { return cum - base < f; });
    if (it == c.end()) throw DomainError("template_inverse: u beyond F(x_max)");
    return (*atoms_)[static_cast<std::size_t>(it - c.begin())];
  }

  /// Continuous inverse in t = log x: safeguarded Newton inside a bisection
  /// bracket; `t_hint` < 0 means no hint. Returns t.
  double inverse_log(double u, double t_hint) const {
    require_continuous("inverse_log");
    if (!(u >= 0) || u > f_max_ * (1 + 1e-14) + 1e-300)
      throw DomainError("template_inverse: u out of [0, F(x_max)]");
    if (u == 0) return 0.0;
    const double tol = 1e-12 * (1 + u);
    double lo = 0, hi = log_x_max_;
    double t = (t_hint > lo && t_hint < hi) ? t_hint : 0.5 * hi;
    for (int it = 0; it < 400; ++it) {
      const double g = parts_->value_log(t) - u;
      if (std::abs(g) <= tol) return t;
      (g < 0 ? lo : hi) = t;
      if (hi - lo <= 4e-16 * std::max(1.0, hi)) return t;
      const double ts = std::max(t, kTinyLog);
      const double slope = parts_->xlogx_deriv_log(ts) / ts;
      double next = slope > 0 ? t - g / slope : lo - 1;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      t = next;
    }
    throw TruncationError("template_inverse: no convergence");
  }

  const std::vector<double>& atom_locations() const {
    require_atomic();
    return *atoms_;
  }
  const std::vector<double>& atom_cumulative() const {
    require_atomic();
    return *cumulative_;
  }
  std::vector<Atom> atoms() const {
    require_atomic();
    std::vector<Atom> out;
    out.reserve(atoms_->size());
    for (std::size_t i = 0; i < atoms_->size(); ++i)
      out.push_back({(*atoms_)[i], (*cumulative_)[i] - (i ? (*cumulative_)[i - 1] : 0.0)});
    return out;
  }

 private:
  static constexpr double kTinyLog = 1e-9;

  TemplateFn() = default;

  void require_continuous(const char* what) const {
    if (is_atomic()) throw NotApplicableError(std::string("TemplateFn::") + what + ": not defined for atomic support");
  }
  void require_atomic() const {
    if (!is_atomic()) throw NotApplicableError("TemplateFn: no atoms for continuous support");
  }

  std::string id_;
  Support support_ = Support::Continuous;
  double x_max_ = 0;
  double log_x_max_ = 0;
  double f_max_ = 0;
  double deviation_exponent_ = 0.5;
  double frequency_ = 0;
  std::shared_ptr<const ContinuousParts> parts_;
  std::shared_ptr<const std::vector<double>> atoms_;
  std::shared_ptr<const std::vector<double>> cumulative_;
};

/// template_inverse as a free function.
inline double template_inverse(const TemplateFn& F, double u) { return F.inverse(u); }

}  // namespace beurling
