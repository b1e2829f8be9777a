#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/numeric.hpp"

namespace beurling {

/// Right-continuous cumulative step function given by its events.
class StepTable {
 public:
  struct Event {
    double x;
    double weight;
  };

  StepTable() = default;

  /// Sorts events (stably), merges equal x and accumulates with compensated
  /// summation. `horizon` is the bound up to which the table is complete.
  static StepTable from_events(std::vector<Event> events, double horizon) {
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.x < b.x; });
    StepTable t;
    t.horizon_ = horizon;
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < events.size();) {
      const double x = events[i].x;
      if (!std::isfinite(x)) throw DomainError("StepTable: non-finite event");
      CompensatedSum<double> w;
      for (; i < events.size() && events[i].x == x; ++i) w += events[i].weight;
      acc += w.value();
      t.xs_.push_back(x);
      t.inc_.push_back(w.value());
      t.cum_.push_back(acc.value());
    }
    return t;
  }

  /// Builds directly from (x, cumulative) pairs.
  static StepTable from_cumulative(std::vector<double> xs, std::vector<double> cum, double horizon) {
    if (xs.size() != cum.size()) throw DomainError("StepTable: size mismatch");
    StepTable t;
    t.horizon_ = horizon;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0 && !(xs[i] > xs[i - 1])) throw DomainError("StepTable: x must increase strictly");
      t.inc_.push_back(cum[i] - (i ? cum[i - 1] : 0.0));
    }
    t.xs_ = std::move(xs);
    t.cum_ = std::move(cum);
    return t;
  }

  std::size_t size() const { return xs_.size(); }
  bool empty() const { return xs_.empty(); }
  double horizon() const { return horizon_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& cumulative() const { return cum_; }
  const std::vector<double>& increments() const { return inc_; }

  /// Value at x (events <= x).
  double query(double x) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    return it == xs_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - xs_.begin()) - 1];
  }
  /// Value just below x.
  double left_limit(double x) const {
    const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    return it == xs_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - xs_.begin()) - 1];
  }

  /// CSV `x,cumulative`, shortest round-trip decimal, LF endings.
  void write_csv(std::ostream& os) const {
    os << "x,cumulative\n";
    for (std::size_t i = 0; i < xs_.size(); ++i) os << format_double(xs_[i]) << ',' << format_double(cum_[i]) << '\n';
  }

  static StepTable read_csv(std::istream& is, double horizon = std::numeric_limits<double>::infinity()) {
    std::string line;
    if (!std::getline(is, line) || line != "x,cumulative") throw DomainError("StepTable CSV: bad header");
    std::vector<double> xs, cum;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw DomainError("StepTable CSV: missing separator");
      xs.push_back(parse_double(line.substr(0, comma)));
      cum.push_back(parse_double(line.substr(comma + 1)));
    }
    return from_cumulative(std::move(xs), std::move(cum), horizon);
  }

  static std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  }
  static double parse_double(const std::string& s) {
    double v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw DomainError("StepTable CSV: bad number '" + s + "'");
    return v;
  }

 private:
  std::vector<double> xs_;
  std::vector<double> inc_;
  std::vector<double> cum_;
  double horizon_ = std::numeric_limits<double>::infinity();
};

}  // namespace beurling
