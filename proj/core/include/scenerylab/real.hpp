#pragma once

// Extended-precision scalar used for coordinates, interval endpoints and
// log-domain masses. Quad precision keeps x + x^2 distinguishable from x at
// x ~ e^-30 and keeps log masses of size 1e13 accurate to well below 1e-10.

#include <quadmath.h>

#include <string>

namespace scenerylab {

using Real = __float128;

inline Real rexp(Real x) { return expq(x); }
inline Real rlog(Real x) { return logq(x); }
inline Real rlog1p(Real x) { return log1pq(x); }
inline Real rexpm1(Real x) { return expm1q(x); }
inline Real rsqrt(Real x) { return sqrtq(x); }
inline Real rabs(Real x) { return fabsq(x); }
inline Real rpow(Real x, Real y) { return powq(x, y); }
inline Real rldexp(Real x, int e) { return ldexpq(x, e); }
inline Real rfloor(Real x) { return floorq(x); }
inline Real rceil(Real x) { return ceilq(x); }
inline Real rround(Real x) { return roundq(x); }
inline Real rfrexp(Real x, int* e) { return frexpq(x, e); }
inline Real rlgamma(Real x) { return lgammaq(x); }
inline bool risnan(Real x) { return isnanq(x) != 0; }
inline bool risinf(Real x) { return isinfq(x) != 0; }
inline bool risfinite(Real x) { return !risnan(x) && !risinf(x); }

inline Real rmax(Real a, Real b) { return a < b ? b : a; }
inline Real rmin(Real a, Real b) { return b < a ? b : a; }

inline constexpr Real kLn2 = M_LN2q;
inline constexpr Real kRealEps = FLT128_EPSILON;
inline constexpr Real kRealInf = __builtin_huge_valq();

inline double toDouble(Real x) { return static_cast<double>(x); }

// Decimal rendering with the requested number of significant digits.
std::string toString(Real x, int digits = 36);

// Parses a decimal literal at full quad precision.
Real parseReal(const std::string& text);

// Window radius e^{-t}. Times that are integer multiples of log 2 (to within
// quad rounding) give the exact dyadic radius, so atoms sitting on dyadic
// window edges are classified the same way as in exact arithmetic.
Real zoomRadius(Real t);

}  // namespace scenerylab
