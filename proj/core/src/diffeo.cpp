#include "scenerylab/diffeo.hpp"

#include <algorithm>
#include <sstream>

#include "scenerylab/errors.hpp"

namespace scenerylab {

namespace {

const Interval kUnitHint = Interval::unit();

class IdentityImpl final : public DiffeoImpl {
 public:
  Real forward(Real x) const override { return x; }
  Real inverse(Real y) const override { return y; }
  Real derivative(Real) const override { return 1; }
  Interval domainHint() const override { return kUnitHint; }
  std::string name() const override { return "identity"; }
  std::optional<std::pair<Real, Real>> affineCoefficients() const override { return std::pair<Real, Real>{1, 0}; }
};

class AffineImpl final : public DiffeoImpl {
 public:
  AffineImpl(Real a, Real b) : a_(a), b_(b) {}
  Real forward(Real x) const override { return a_ * x + b_; }
  Real inverse(Real y) const override { return (y - b_) / a_; }
  Real derivative(Real) const override { return a_; }
  Interval domainHint() const override { return kUnitHint; }
  std::string name() const override {
    return "affine:" + toString(a_, 36) + "," + toString(b_, 36);
  }
  std::optional<std::pair<Real, Real>> affineCoefficients() const override { return std::pair<Real, Real>{a_, b_}; }

 private:
  Real a_, b_;
};

// Diffeo given by a closed-form inverse g on [-w, w] with affine extension
// outside. forward() inverts g.
class LocalInverseImpl : public DiffeoImpl {
 public:
  explicit LocalInverseImpl(Real w) : w_(w) {}

  Real inverse(Real x) const override {
    if (x > w_) return gw_ + dgw_ * (x - w_);
    if (x < -w_) return gmw_ + dgmw_ * (x + w_);
    return g(x);
  }
  Real forward(Real y) const override {
    if (y > gw_) return w_ + (y - gw_) / dgw_;
    if (y < gmw_) return -w_ + (y - gmw_) / dgmw_;
    return localForward(y);
  }
  Real derivative(Real y) const override {
    if (y > gw_) return 1 / dgw_;
    if (y < gmw_) return 1 / dgmw_;
    return 1 / dg(localForward(y));
  }
  Interval domainHint() const override { return Interval::closed(-w_, w_); }
  Real inverseOffset(Real x) const override {
    if (x > w_ || x < -w_) return inverse(x) - x;
    return offset(x);
  }

 protected:
  void init() {
    gw_ = g(w_);
    gmw_ = g(-w_);
    dgw_ = dg(w_);
    dgmw_ = dg(-w_);
  }
  virtual Real g(Real x) const = 0;
  virtual Real dg(Real x) const = 0;
  // g(x) - x
  virtual Real offset(Real x) const = 0;
  virtual Real localForward(Real y) const {
    return invertMonotone([this](Real x) { return g(x); }, y, Interval::closed(-w_, w_),
                          [this](Real x) { return dg(x); }, y);
  }

  Real w_;
  Real gw_ = 0, gmw_ = 0, dgw_ = 1, dgmw_ = 1;
};

class Ex1Impl final : public LocalInverseImpl {
 public:
  Ex1Impl() : LocalInverseImpl(Real(4) / 10) { init(); }
  std::string name() const override { return "ex1"; }

 protected:
  Real g(Real x) const override { return x - x * x * x; }
  Real dg(Real x) const override { return 1 - 3 * x * x; }
  Real offset(Real x) const override { return -x * x * x; }
  // Newton on x - x^3 = y from the series y + y^3 + 3 y^5.
  Real localForward(Real y) const override {
    const Real y2 = y * y;
    Real x = y * (1 + y2 * (1 + 3 * y2));
    for (int i = 0; i < 40; ++i) {
      const Real step = (x - x * x * x - y) / (1 - 3 * x * x);
      x -= step;
      if (rabs(step) <= rabs(x) * kRealEps) break;
    }
    return x;
  }
};

class Ex5Impl final : public LocalInverseImpl {
 public:
  explicit Ex5Impl(Real eps) : LocalInverseImpl(eps) { init(); }
  std::string name() const override { return "ex5"; }

 protected:
  Real g(Real x) const override {
    const Real w = x - x * x;
    return 2 * w / (1 + rsqrt(1 + 4 * w));
  }
  Real dg(Real x) const override { return (1 - 2 * x) / rsqrt(1 + 4 * (x - x * x)); }
  // g + g^2 = x - x^2
  Real offset(Real x) const override {
    const Real v = g(x);
    return -(x * x + v * v);
  }
  Real localForward(Real y) const override {
    const Real v = y + y * y;
    return 2 * v / (1 + rsqrt(1 - 4 * v));
  }
};

class Ex3Impl final : public DiffeoImpl {
 public:
  Real forward(Real y) const override { return y <= 0 ? y : 2 * y / (1 + rsqrt(1 + 4 * y)); }
  Real inverse(Real x) const override { return x <= 0 ? x : x + x * x; }
  Real inverseOffset(Real x) const override { return x <= 0 ? Real(0) : x * x; }
  Real derivative(Real y) const override { return y <= 0 ? Real(1) : 1 / rsqrt(1 + 4 * y); }
  Interval domainHint() const override { return kUnitHint; }
  std::string name() const override { return "ex3"; }
};

class SeparatingImpl final : public DiffeoImpl {
 public:
  SeparatingImpl(PiecewiseLinearDerivative pl, std::string name) : pl_(std::move(pl)), name_(std::move(name)) {}
  Real forward(Real x) const override { return pl_.primitive(x); }
  Real inverse(Real y) const override { return pl_.inversePrimitive(y); }
  Real derivative(Real x) const override { return pl_.derivative(x); }
  Interval domainHint() const override { return kUnitHint; }
  std::string name() const override { return name_; }

 private:
  PiecewiseLinearDerivative pl_;
  std::string name_;
};

std::vector<Real> parseRealList(const std::string& text) {
  std::vector<Real> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parseReal(item));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad number '" + item + "' in diffeo name");
    }
  }
  return out;
}

}  // namespace

Diffeo identityDiffeo() { return Diffeo(std::make_shared<IdentityImpl>()); }

Diffeo affineDiffeo(Real a, Real b) {
  if (!(a > 0)) throw DomainError("affine diffeo needs a > 0");
  return Diffeo(std::make_shared<AffineImpl>(a, b));
}

Diffeo ex1Diffeo() { return Diffeo(std::make_shared<Ex1Impl>()); }
Diffeo ex3Diffeo() { return Diffeo(std::make_shared<Ex3Impl>()); }

Diffeo ex5Diffeo(Real eps) {
  if (!(eps > 0 && eps < Real(1) / 5)) throw DomainError("ex5 needs 0 < eps < 1/5");
  return Diffeo(std::make_shared<Ex5Impl>(eps));
}

Real ex1InverseClosedForm(Real x) {
  if (rabs(x) > Real(4) / 10) throw DomainError("x - x^3 is only used on |x| <= 0.4");
  return x - x * x * x;
}

Real ex5GClosedForm(Real x, Real eps) {
  if (!(rabs(x) < eps)) throw DomainError("g is only defined on (-eps, eps)");
  const Real w = x - x * x;
  return 2 * w / (1 + rsqrt(1 + 4 * w));
}

PiecewiseLinearDerivative::PiecewiseLinearDerivative(const std::vector<Real>& knots,
                                                     const std::vector<Real>& values) {
  if (knots.size() != values.size() || knots.empty()) {
    throw DomainError("knots and values must be non-empty and of equal length");
  }
  xs_.push_back(0);
  vs_.push_back(1);
  for (size_t i = knots.size(); i-- > 0;) {
    if (!(knots[i] > xs_.back())) throw MonotonicityError("knot sequence is not strictly decreasing");
    if (!(values[i] >= vs_.back())) throw MonotonicityError("derivative values must increase with x");
    xs_.push_back(knots[i]);
    vs_.push_back(values[i]);
  }
  cum_.assign(xs_.size(), 0);
  for (size_t i = 1; i < xs_.size(); ++i) {
    cum_[i] = cum_[i - 1] + (xs_[i] - xs_[i - 1]) * (vs_[i] + vs_[i - 1]) / 2;
  }
}

Real PiecewiseLinearDerivative::derivative(Real x) const {
  if (x <= 0) return 1;
  if (x >= xs_.back()) return vs_.back();
  const size_t i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin() - 1;
  const Real h = x - xs_[i];
  return vs_[i] + (vs_[i + 1] - vs_[i]) * h / (xs_[i + 1] - xs_[i]);
}

Real PiecewiseLinearDerivative::primitive(Real x) const {
  if (x <= 0) return x;
  if (x >= xs_.back()) return cum_.back() + vs_.back() * (x - xs_.back());
  const size_t i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin() - 1;
  const Real h = x - xs_[i];
  const Real len = xs_[i + 1] - xs_[i];
  return cum_[i] + vs_[i] * h + (vs_[i + 1] - vs_[i]) * h * h / (2 * len);
}

Real PiecewiseLinearDerivative::inversePrimitive(Real y) const {
  if (y <= 0) return y;
  if (y >= cum_.back()) return xs_.back() + (y - cum_.back()) / vs_.back();
  const size_t i = std::upper_bound(cum_.begin(), cum_.end(), y) - cum_.begin() - 1;
  const Real dy = y - cum_[i];
  const Real slope = (vs_[i + 1] - vs_[i]) / (xs_[i + 1] - xs_[i]);
  // Root of slope/2 h^2 + v h - dy = 0 in cancellation-free form.
  return xs_[i] + 2 * dy / (vs_[i] + rsqrt(vs_[i] * vs_[i] + 2 * slope * dy));
}

Diffeo separatingDiffeo(const std::vector<Real>& T, int nStart) {
  if (T.empty()) throw DomainError("separatingDiffeo needs at least one time");
  if (nStart < 1) throw DomainError("separatingDiffeo needs nStart >= 1");
  std::vector<Real> knots, values;
  for (size_t j = 0; j < T.size(); ++j) {
    const int n = nStart + static_cast<int>(j);
    const Real twoN = rldexp(1, n);
    knots.push_back(rexp(-T[j]) * (1 - 1 / twoN) / 2);
    values.push_back((twoN + 1) / (twoN - 1));
    if (j > 0 && !(knots[j] < knots[j - 1])) {
      throw MonotonicityError("e^{-T_n}(1 - 2^{-n}) must be strictly decreasing; thin the sequence first");
    }
  }
  PiecewiseLinearDerivative pl(knots, values);

  // f(x(1 - 2^{-n})) >= x for x >= e^{-T_n}.
  for (size_t j = 0; j < T.size(); ++j) {
    const Real shrink = 1 - rldexp(1, -(nStart + static_cast<int>(j)));
    for (int k = 0; k <= 8; ++k) {
      const Real x = rexp(-T[j]) * rpow(2, Real(k) / 2);
      if (pl.primitive(x * shrink) < x * (1 - 64 * kRealEps)) {
        throw MonotonicityError("separating guarantee f(x(1 - 2^-n)) >= x failed");
      }
    }
  }

  std::string name = nStart == 1 ? "separating:" : "separating@" + std::to_string(nStart) + ":";
  for (size_t j = 0; j < T.size(); ++j) name += (j ? "," : "") + toString(T[j], 36);
  return Diffeo(std::make_shared<SeparatingImpl>(std::move(pl), std::move(name)));
}

Diffeo makeCatalogDiffeo(const std::string& name) {
  if (name == "identity") return identityDiffeo();
  if (name == "ex1") return ex1Diffeo();
  if (name == "ex3") return ex3Diffeo();
  if (name == "ex5") return ex5Diffeo();
  if (name.rfind("affine:", 0) == 0) {
    const auto v = parseRealList(name.substr(7));
    if (v.size() != 2) throw ConfigError("affine diffeo needs 'affine:a,b'");
    if (!(v[0] > 0)) throw ConfigError("affine diffeo needs a > 0");
    return affineDiffeo(v[0], v[1]);
  }
  if (name.rfind("separating", 0) == 0) {
    const auto colon = name.find(':');
    if (colon == std::string::npos) throw ConfigError("separating diffeo needs 'separating:T1,T2,...'");
    int nStart = 1;
    const std::string head = name.substr(0, colon);
    if (head.size() > 10) {
      if (head[10] != '@') throw ConfigError("bad diffeo name '" + name + "'");
      try {
        nStart = std::stoi(head.substr(11));
      } catch (const std::exception&) {
        throw ConfigError("bad start index in '" + name + "'");
      }
    }
    const auto T = parseRealList(name.substr(colon + 1));
    try {
      return separatingDiffeo(T, nStart);
    } catch (const NumericError& e) {
      throw ConfigError(std::string("separating diffeo: ") + e.what());
    }
  }
  throw ConfigError("unknown diffeo '" + name + "'");
}

Real invertMonotone(const std::function<Real(Real)>& g, Real y, const Interval& bracket,
                    const std::function<Real(Real)>& dg, std::optional<Real> guess) {
  Real lo = bracket.lo;
  Real hi = bracket.hi;
  const Real glo = g(lo) - y;
  const Real ghi = g(hi) - y;
  if (glo > 0 || ghi < 0) {
    throw BracketError("invertMonotone: y = " + toString(y, 20) + " outside [g(lo), g(hi)]");
  }
  if (glo == 0) return lo;
  if (ghi == 0) return hi;

  Real x = guess && *guess > lo && *guess < hi ? *guess : lo - glo * (hi - lo) / (ghi - glo);
  if (!(x > lo && x < hi)) x = lo + (hi - lo) / 2;
  Real xPrev = lo;
  Real gPrev = glo;
  Real prevStep = hi - lo;
  int nonContracting = 0;
  for (int iter = 0; iter < 600; ++iter) {
    const Real gx = g(x) - y;
    if (gx == 0) return x;
    if (gx < 0) {
      lo = x;
    } else {
      hi = x;
    }
    const Real scale = rmax(rmax(rabs(lo), rabs(hi)), Real(1e-4000Q));
    if (hi - lo <= 4 * kRealEps * scale) return x;

    Real next = lo + (hi - lo) / 2;
    if (nonContracting < 3) {
      const Real slope = dg ? dg(x) : (gx - gPrev) / (x - xPrev);
      if (slope > 0 && risfinite(slope)) {
        const Real cand = x - gx / slope;
        if (cand > lo && cand < hi) {
          if (rabs(cand - x) > prevStep / 2) ++nonContracting;
          if (rabs(cand - x) <= 2 * kRealEps * rabs(x)) return cand;
          next = cand;
        }
      }
    }
    prevStep = rabs(next - x);
    xPrev = x;
    gPrev = gx;
    x = next;
  }
  return x;
}

}  // namespace scenerylab
