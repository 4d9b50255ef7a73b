#include "scenerylab/real.hpp"

#include <cstdio>
#include <stdexcept>

namespace scenerylab {

std::string toString(Real x, int digits) {
  char buf[128];
  quadmath_snprintf(buf, sizeof buf, "%.*Qg", digits, x);
  return buf;
}

Real parseReal(const std::string& text) {
  char* end = nullptr;
  Real v = strtoflt128(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw std::invalid_argument("not a number: " + text);
  }
  return v;
}

Real zoomRadius(Real t) {
  const Real k = rround(t / kLn2);
  if (k >= 0 && k < 16000 && rabs(t - k * kLn2) <= 64 * kRealEps * rmax(1, rabs(t))) {
    return rldexp(1, -static_cast<int>(k));
  }
  return rexp(-t);
}

}  // namespace scenerylab
