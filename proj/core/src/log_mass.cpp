#include "scenerylab/log_mass.hpp"

#include <cmath>

#include "scenerylab/errors.hpp"

namespace scenerylab {

namespace {

// -exp(700): the most negative log mass kept at level 1.
const Real kLevel1Floor = -rexp(LogMass::kLevel2Threshold);

bool hasLevel1Value(const LogMass& m) {
  return m.level() == 1 || (m.level() == 2 && m.value() < LogMass::kLevel1Limit);
}

}  // namespace

Real log1mexp(Real d) {
  if (d > kLn2) return rlog1p(-rexp(-d));
  return rlog(-rexpm1(-d));
}

LogMass LogMass::fromLog(Real logm) {
  if (risnan(logm)) throw DomainError("log mass is NaN");
  if (risinf(logm) && logm < 0) return zero();
  if (logm < kLevel1Floor) return LogMass(2, rlog(-logm));
  return LogMass(1, logm);
}

LogMass LogMass::fromLevel2(Real u) {
  if (risnan(u)) throw DomainError("level-2 value is NaN");
  if (risinf(u) && u > 0) return zero();
  if (u <= kLevel2Threshold) return LogMass(1, -rexp(u));
  return LogMass(2, u);
}

LogMass LogMass::fromMass(Real m) {
  if (m < 0) throw NegativeMass("negative mass " + scenerylab::toString(m, 20));
  if (m == 0) return zero();
  return fromLog(rlog(m));
}

Real LogMass::logValue() const {
  switch (level_) {
    case 0: return -kRealInf;
    case 1: return value_;
    default: return -rexp(value_);
  }
}

Real LogMass::level2Value() const {
  switch (level_) {
    case 0: return kRealInf;
    case 1: return rlog(-value_);
    default: return value_;
  }
}

double LogMass::toDouble() const { return std::exp(scenerylab::toDouble(logValue())); }

std::string LogMass::toString() const {
  if (level_ == 0) return "ZERO";
  return "L" + std::to_string(level_) + "(" + scenerylab::toString(value_, 21) + ")";
}

std::strong_ordering operator<=>(const LogMass& a, const LogMass& b) {
  if (a.level_ == 0 || b.level_ == 0) {
    return (a.level_ != 0) <=> (b.level_ != 0);
  }
  if (a.level_ != b.level_) return b.level_ <=> a.level_;
  const Real x = a.level_ == 1 ? a.value_ : b.value_;
  const Real y = a.level_ == 1 ? b.value_ : a.value_;
  if (x < y) return std::strong_ordering::less;
  if (y < x) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

LogMass operator*(const LogMass& a, const LogMass& b) {
  if (a.isZero() || b.isZero()) return LogMass::zero();
  if (hasLevel1Value(a) && hasLevel1Value(b)) {
    return LogMass::fromLog(a.logValue() + b.logValue());
  }
  if (a.level_ == 2 && b.level_ == 2) {
    // exp(-e^u1) exp(-e^u2) = exp(-(e^u1 + e^u2))
    const Real hi = rmax(a.value_, b.value_);
    const Real lo = rmin(a.value_, b.value_);
    return LogMass::fromLevel2(hi + rlog1p(rexp(lo - hi)));
  }
  const LogMass& big = a.level_ == 2 ? a : b;
  const Real l = (a.level_ == 2 ? b : a).logValue();
  return LogMass::fromLevel2(big.value_ + rlog1p(-l * rexp(-big.value_)));
}

LogMass logSumExp(const LogMass& a, const LogMass& b) {
  if (a.isZero()) return b;
  if (b.isZero()) return a;
  const LogMass& hi = a < b ? b : a;
  const LogMass& lo = a < b ? a : b;
  if (hasLevel1Value(hi) && hasLevel1Value(lo)) {
    const Real h = hi.logValue();
    return LogMass::fromLog(h + rlog1p(rexp(lo.logValue() - h)));
  }
  if (hi.level() == 1) return hi;  // lo is below exp(-e^11000) relative to hi
  // Both level 2, u1 <= u2.
  const Real u1 = hi.value();
  const Real u2 = lo.value();
  Real r = 1;  // m2 / m1
  if (u2 > u1) {
    const Real ld = u1 + rlog(rexpm1(u2 - u1));
    r = ld > 12 ? Real(0) : rexp(-rexp(ld));
  }
  return LogMass::fromLevel2(u1 + rlog1p(-rlog1p(r) * rexp(-u1)));
}

LogMass logDiffExp(const LogMass& a, const LogMass& b, bool* cancelled) {
  if (cancelled) *cancelled = false;
  if (b.isZero()) return a;
  auto cancel = [&]() {
    if (cancelled) {
      *cancelled = true;
      return LogMass::zero();
    }
    throw CancellationError("logDiffExp: operands " + a.toString() + " and " + b.toString() +
                            " agree to within the cancellation tolerance");
  };
  if (a.isZero()) throw NegativeMass("logDiffExp: subtracting a positive mass from ZERO");

  if (hasLevel1Value(a) && hasLevel1Value(b)) {
    const Real la = a.logValue();
    const Real diff = la - b.logValue();
    const Real tol = LogMass::kCancellationTol * rmax(1, rabs(la));
    if (diff < -tol) throw NegativeMass("logDiffExp: b > a (" + b.toString() + " > " + a.toString() + ")");
    if (diff < tol) return cancel();
    return LogMass::fromLog(la + log1mexp(diff));
  }
  if (a.level() == 1) return a;  // b is negligible
  if (b.level() == 1) throw NegativeMass("logDiffExp: b > a (" + b.toString() + " > " + a.toString() + ")");

  const Real ua = a.value();
  const Real ub = b.value();
  const Real rel = rexpm1(ub - ua);  // (log a - log b) / |log a|
  if (rel < -LogMass::kCancellationTol) {
    throw NegativeMass("logDiffExp: b > a (" + b.toString() + " > " + a.toString() + ")");
  }
  if (rel < LogMass::kCancellationTol) return cancel();
  const Real ld = ua + rlog(rel);  // log(e^ub - e^ua)
  const Real logOneMinusR = ld > 12 ? Real(0) : log1mexp(rexp(ld));
  return LogMass::fromLevel2(ua + rlog1p(-logOneMinusR * rexp(-ua)));
}

Real logRatio(const LogMass& a, const LogMass& b) {
  if (b.isZero()) throw ZeroDenominator("mass ratio with ZERO denominator");
  if (a.isZero()) return -kRealInf;
  if (hasLevel1Value(a) && hasLevel1Value(b)) return a.logValue() - b.logValue();
  if (hasLevel1Value(a)) return a.logValue() + rexp(b.value());
  if (hasLevel1Value(b)) return -rexp(a.value()) - b.logValue();
  const Real ua = a.value();
  const Real ub = b.value();
  if (ua >= ub) return -rexp(ub + rlog(rexpm1(ua - ub)));
  return rexp(ua + rlog(rexpm1(ub - ua)));
}

double ratio(const LogMass& a, const LogMass& b) {
  const Real lr = logRatio(a, b);
  if (lr < -800) return 0.0;
  if (lr > 800) return HUGE_VAL;
  return toDouble(rexp(lr));
}

}  // namespace scenerylab
