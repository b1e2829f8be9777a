#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "beurling/errors.hpp"

namespace beurling {

enum class Provenance : std::uint8_t { Sampled, Classical, Scaled, SubtractedMarker };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Sampled: return "sampled";
    case Provenance::Classical: return "classical";
    case Provenance::Scaled: return "scaled";
    case Provenance::SubtractedMarker: return "subtracted";
  }
  return "?";
}

/// Finite non-decreasing multiset of generalized primes.
///
/// `horizon` is the bound up to which the list is the full system: a sample or
/// sieve run to X has horizon X, while a hand-made finite system has an
/// infinite horizon.
struct GenPrimes {
  std::vector<double> values;
  std::vector<Provenance> provenance;
  std::vector<double> scale;  // beta for Scaled elements, 0 otherwise
  std::optional<std::uint64_t> seed;
  std::string source;  // id of the template a sample was drawn from
  double horizon = std::numeric_limits<double>::infinity();

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  bool finite_system() const { return std::isinf(horizon); }

  void push_back(double v, Provenance p, double beta = 0.0) {
    values.push_back(v);
    provenance.push_back(p);
    scale.push_back(beta);
  }

  /// Builds a finite system with the given tag from arbitrary values.
  static GenPrimes from_values(std::vector<double> v, Provenance p = Provenance::Classical) {
    GenPrimes g;
    std::sort(v.begin(), v.end());
    for (double x : v) g.push_back(x, p);
    g.validate();
    return g;
  }

  /// pi(x): number of elements <= x (with multiplicity).
  std::size_t count_upto(double x) const {
    return static_cast<std::size_t>(std::upper_bound(values.begin(), values.end(), x) - values.begin());
  }

  void validate() const {
    if (provenance.size() != values.size() || scale.size() != values.size())
      throw DomainError("GenPrimes: tag arrays out of sync");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 1)) throw DomainError("GenPrimes: every element must exceed 1");
      if (i > 0 && values[i] < values[i - 1]) throw DomainError("GenPrimes: values must be sorted");
    }
  }

  /// Reorders by value keeping tags attached (stable).
  void sort() {
    std::vector<std::size_t> idx(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    GenPrimes out;
    out.seed = seed;
    out.source = source;
    out.horizon = horizon;
    for (std::size_t i : idx) out.push_back(values[i], provenance[i], scale[i]);
    *this = std::move(out);
  }
};

}  // namespace beurling
