#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace obslearn {

// Closed interval of types, possibly unbounded on either side. lo <= hi always;
// lo == hi is a singleton. Empty intersections are reported by intersect().
struct belief_interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static belief_interval all() { return {}; }
  static belief_interval at_least(double a) { return {a, std::numeric_limits<double>::infinity()}; }
  static belief_interval at_most(double b) { return {-std::numeric_limits<double>::infinity(), b}; }
  static belief_interval point(double p) { return {p, p}; }
  static belief_interval bounded(double a, double b) {
    if (!(a <= b)) fail(errc::invalid_argument, "interval endpoints out of order");
    return {a, b};
  }

  bool valid() const { return lo <= hi && !std::isnan(lo) && !std::isnan(hi); }
  bool singleton() const { return lo == hi; }
  bool bounded_below() const { return std::isfinite(lo); }
  bool bounded_above() const { return std::isfinite(hi); }

  // Mirror image about the origin. Exact: IEEE negation has no rounding.
  belief_interval reflected() const { return {-hi, -lo}; }

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool subset_of(const belief_interval& o) const { return o.lo <= lo && hi <= o.hi; }

  friend bool operator==(const belief_interval& x, const belief_interval& y) {
    return x.lo == y.lo && x.hi == y.hi;
  }
};

// Intersection; empty results come back as nullopt-like flag via ok.
struct intersect_result {
  belief_interval value;
  bool ok = false;
};

inline intersect_result intersect(const belief_interval& x, const belief_interval& y) {
  belief_interval r{std::max(x.lo, y.lo), std::min(x.hi, y.hi)};
  if (r.lo > r.hi) return {r, false};
  return {r, true};
}

}  // namespace obslearn
