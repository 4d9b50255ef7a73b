#pragma once

#include <string>

#include "scenerylab/real.hpp"

namespace scenerylab {

// Interval of the real line with explicit endpoint closedness. Atoms sitting
// exactly on an endpoint are counted iff the flag admits them.
struct Interval {
  Real lo = 1;
  Real hi = 0;
  bool loClosed = true;
  bool hiClosed = true;

  static Interval closed(Real a, Real b) { return {a, b, true, true}; }
  static Interval open(Real a, Real b) { return {a, b, false, false}; }
  static Interval leftOpen(Real a, Real b) { return {a, b, false, true}; }
  static Interval rightOpen(Real a, Real b) { return {a, b, true, false}; }
  static Interval point(Real a) { return {a, a, true, true}; }
  static Interval empty() { return {1, 0, true, true}; }
  // The window I = [-1, 1].
  static Interval unit() { return {-1, 1, true, true}; }

  bool isEmpty() const { return hi < lo || (lo == hi && !(loClosed && hiClosed)); }
  bool isWellFormed() const { return !risnan(lo) && !risnan(hi); }
  bool contains(Real y) const {
    return (loClosed ? lo <= y : lo < y) && (hiClosed ? y <= hi : y < hi);
  }
  Real length() const { return isEmpty() ? Real(0) : hi - lo; }

  // Intersection, keeping the stricter flag on coinciding endpoints.
  Interval intersect(const Interval& o) const;
  // Image under y -> c + s*y with s > 0.
  Interval affine(Real c, Real s) const { return {c + s * lo, c + s * hi, loClosed, hiClosed}; }

  std::string toString() const;
};

}  // namespace scenerylab
