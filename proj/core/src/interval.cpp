#include "scenerylab/interval.hpp"

namespace scenerylab {

Interval Interval::intersect(const Interval& o) const {
  if (isEmpty() || o.isEmpty()) return empty();
  Interval r;
  if (lo > o.lo) {
    r.lo = lo;
    r.loClosed = loClosed;
  } else if (o.lo > lo) {
    r.lo = o.lo;
    r.loClosed = o.loClosed;
  } else {
    r.lo = lo;
    r.loClosed = loClosed && o.loClosed;
  }
  if (hi < o.hi) {
    r.hi = hi;
    r.hiClosed = hiClosed;
  } else if (o.hi < hi) {
    r.hi = o.hi;
    r.hiClosed = o.hiClosed;
  } else {
    r.hi = hi;
    r.hiClosed = hiClosed && o.hiClosed;
  }
  return r.isEmpty() ? empty() : r;
}

std::string Interval::toString() const {
  if (isEmpty()) return "{}";
  return std::string(loClosed ? "[" : "(") + scenerylab::toString(lo, 20) + ", " +
         scenerylab::toString(hi, 20) + (hiClosed ? "]" : ")");
}

}  // namespace scenerylab
