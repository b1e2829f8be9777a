#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/numeric.hpp"

namespace beurling {

/// Finite multiset of complex numbers, closed under conjugation.
class ComplexMultiset {
 public:
  struct Entry {
    cplx value;
    int multiplicity;
    bool operator==(const Entry&) const = default;
  };

  ComplexMultiset() = default;
  ComplexMultiset(std::initializer_list<cplx> values) {
    for (cplx v : values) entries_.push_back({v, 1});
    canonicalize();
  }
  explicit ComplexMultiset(std::vector<Entry> entries) : entries_(std::move(entries)) { canonicalize(); }

  /// Adds `value` and, when it is not real, its conjugate with the same
  /// multiplicity.
  static ComplexMultiset symmetric(const std::vector<Entry>& half) {
    std::vector<Entry> all;
    for (const auto& e : half) {
      all.push_back(e);
      if (e.value.imag() != 0.0) all.push_back({std::conj(e.value), e.multiplicity});
    }
    return ComplexMultiset(std::move(all));
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Size counted with multiplicity.
  int size() const {
    int n = 0;
    for (const auto& e : entries_) n += e.multiplicity;
    return n;
  }

  int multiplicity(cplx v) const {
    for (const auto& e : entries_)
      if (e.value == v) return e.multiplicity;
    return 0;
  }

  double max_abs() const {
    double q = 0;
    for (const auto& e : entries_) q = std::max(q, std::abs(e.value));
    return q;
  }
  double max_real() const {
    double q = -std::numeric_limits<double>::infinity();
    for (const auto& e : entries_) q = std::max(q, e.value.real());
    return q;
  }

  /// Entries with Im >= 0 and the weight each contributes to a real sum of
  /// f(value) + f(conj value): m for real values, 2m for conjugate pairs.
  std::vector<std::pair<cplx, double>> folded() const {
    std::vector<std::pair<cplx, double>> out;
    for (const auto& e : entries_) {
      if (e.value.imag() < 0) continue;
      out.emplace_back(e.value, e.value.imag() == 0 ? e.multiplicity : 2.0 * e.multiplicity);
    }
    return out;
  }

  bool disjoint_from(const ComplexMultiset& other) const {
    for (const auto& e : entries_)
      if (other.multiplicity(e.value) > 0) return false;
    return true;
  }

  bool operator==(const ComplexMultiset&) const = default;

 private:
  void canonicalize() {
    for (const auto& e : entries_) {
      if (e.multiplicity <= 0) throw DomainError("ComplexMultiset: multiplicities must be positive");
      if (!(e.value.real() > 0.0 && e.value.real() < 1.0))
        throw DomainError("ComplexMultiset: real parts must lie in (0, 1)");
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
      return a.value.imag() < b.value.imag();
    });
    std::vector<Entry> merged;
    for (const auto& e : entries_) {
      if (!merged.empty() && merged.back().value == e.value)
        merged.back().multiplicity += e.multiplicity;
      else
        merged.push_back(e);
    }
    entries_ = std::move(merged);
    for (const auto& e : entries_)
      if (multiplicity(std::conj(e.value)) != e.multiplicity)
        throw DomainError("ComplexMultiset: not closed under conjugation");
  }

  std::vector<Entry> entries_;
};

}  // namespace beurling
