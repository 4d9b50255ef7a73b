#pragma once

#include <compare>
#include <string>

#include "scenerylab/real.hpp"

namespace scenerylab {

// A nonnegative extended real held in the log domain.
//
//   level 1: value = log m
//   level 2: value = u with m = exp(-exp(u))
//
// Values are kept canonical: level 2 is used exactly when u > kLevel2Threshold,
// so the two levels never overlap and ordering is a simple case analysis.
class LogMass {
 public:
  static constexpr double kLevel2Threshold = 700.0;
  // Above this inner exponent -exp(u) no longer fits in a quad float.
  static constexpr double kLevel1Limit = 11000.0;
  // logDiffExp reports cancellation when a - b < kCancellationTol * max(1, |a|).
  static constexpr double kCancellationTol = 1e-13;

  LogMass() = default;  // ZERO

  static LogMass zero() { return LogMass(); }
  static LogMass one() { return fromLog(0); }
  static LogMass fromLog(Real logm);
  static LogMass fromLevel2(Real u);
  static LogMass fromMass(Real m);

  bool isZero() const { return level_ == 0; }
  int level() const { return level_; }
  Real value() const { return value_; }

  // log m. For level 2 this is -exp(u), which is -inf once u exceeds the
  // quad range; use level2Value() there.
  Real logValue() const;
  // log(-log m). Only meaningful for m < 1.
  Real level2Value() const;
  double toDouble() const;

  friend LogMass operator*(const LogMass& a, const LogMass& b);

  friend bool operator==(const LogMass& a, const LogMass& b) {
    return a.level_ == b.level_ && (a.level_ == 0 || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const LogMass& a, const LogMass& b);

  std::string toString() const;

 private:
  LogMass(int level, Real value) : level_(level), value_(value) {}

  int level_ = 0;  // 0 marks ZERO
  Real value_ = 0;
};

LogMass logSumExp(const LogMass& a, const LogMass& b);

// a - b for a >= b. When the operands agree to within the cancellation
// tolerance the result is ZERO: if `cancelled` is non-null it is set and
// ZERO returned, otherwise CancellationError is thrown. b > a beyond the
// tolerance throws NegativeMass.
LogMass logDiffExp(const LogMass& a, const LogMass& b, bool* cancelled = nullptr);

// log(a / b), possibly +-inf. Throws ZeroDenominator when b is ZERO.
Real logRatio(const LogMass& a, const LogMass& b);

// a / b as a double, computed from the exponent difference so nothing
// underflows before the final exp.
double ratio(const LogMass& a, const LogMass& b);

// log(1 - exp(-d)) for d >= 0.
Real log1mexp(Real d);

}  // namespace scenerylab
