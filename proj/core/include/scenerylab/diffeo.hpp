#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scenerylab/interval.hpp"
#include "scenerylab/real.hpp"

namespace scenerylab {

class DiffeoImpl {
 public:
  virtual ~DiffeoImpl() = default;
  virtual Real forward(Real x) const = 0;
  virtual Real inverse(Real y) const = 0;
  virtual Real derivative(Real x) const = 0;
  virtual Interval domainHint() const = 0;
  virtual std::string name() const = 0;
  // (a, b) when forward(x) = a x + b.
  virtual std::optional<std::pair<Real, Real>> affineCoefficients() const { return std::nullopt; }
  // inverse(y) - y, evaluated without first rounding inverse(y).
  virtual Real inverseOffset(Real y) const { return inverse(y) - y; }
};

// Orientation-preserving C^1 diffeomorphism of the line, held as a
// (forward, inverse, derivative) triple. Catalog maps whose closed forms are
// only local are extended affinely outside domainHint().
class Diffeo {
 public:
  explicit Diffeo(std::shared_ptr<const DiffeoImpl> impl) : impl_(std::move(impl)) {}

  Real forward(Real x) const { return impl_->forward(x); }
  Real inverse(Real y) const { return impl_->inverse(y); }
  Real derivative(Real x) const { return impl_->derivative(x); }
  Interval domainHint() const { return impl_->domainHint(); }
  std::string name() const { return impl_->name(); }
  std::optional<std::pair<Real, Real>> affineCoefficients() const { return impl_->affineCoefficients(); }
  Real inverseOffset(Real y) const { return impl_->inverseOffset(y); }

  // s = log f'(x): the time shift pairing mu_{x,t} with (f mu)_{f(x), t-s}.
  Real timeShift(Real x) const { return rlog(derivative(x)); }

 private:
  std::shared_ptr<const DiffeoImpl> impl_;
};

Diffeo identityDiffeo();
Diffeo affineDiffeo(Real a, Real b);
// f^{-1}(x) = x - x^3 near 0.
Diffeo ex1Diffeo();
// f^{-1}(x) = x for x <= 0 and x + x^2 for x > 0.
Diffeo ex3Diffeo();
// f = g^{-1} with g(x) + g(x)^2 = x - x^2 on (-eps, eps).
Diffeo ex5Diffeo(Real eps = Real(1) / 10);

// Names: ex1, ex3, ex5, identity, affine:a,b, separating:T1,T2,...
// (separating@n0:T1,... starts the knot index at n0). Throws ConfigError.
Diffeo makeCatalogDiffeo(const std::string& name);

// Raw local closed forms. They throw DomainError outside their window.
Real ex1InverseClosedForm(Real x);   // x - x^3, |x| <= 0.4
Real ex5GClosedForm(Real x, Real eps = Real(1) / 10);

// Derivative 1 on x <= 0, continuous and piecewise linear through the
// knots, constant beyond the largest knot. The primitive and its inverse are
// evaluated segment by segment in closed form.
class PiecewiseLinearDerivative {
 public:
  // knots: decreasing positive positions; values: derivative at each knot.
  PiecewiseLinearDerivative(const std::vector<Real>& knots, const std::vector<Real>& values);

  Real derivative(Real x) const;
  Real primitive(Real x) const;  // int_0^x f'(s) ds
  Real inversePrimitive(Real y) const;

 private:
  std::vector<Real> xs_;  // ascending, xs_[0] = 0
  std::vector<Real> vs_;  // derivative at xs_
  std::vector<Real> cum_;
};

// Separating map: knots e^{-T_n}(1 - 2^{-n})/2 with
// derivative (2^n + 1)/(2^n - 1), n = nStart, nStart + 1, ...
// Throws MonotonicityError if the knots are not strictly decreasing.
Diffeo separatingDiffeo(const std::vector<Real>& T, int nStart = 1);

// Solves g(x) = y for x in bracket, g increasing. Newton steps when dg is
// given (secant steps otherwise), safeguarded by the bracket; falls back to
// bisection after three non-contracting steps. Throws BracketError.
Real invertMonotone(const std::function<Real(Real)>& g, Real y, const Interval& bracket,
                    const std::function<Real(Real)>& dg = {}, std::optional<Real> guess = std::nullopt);

}  // namespace scenerylab
