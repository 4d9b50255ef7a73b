#include "scenerylab/scenery.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "scenerylab/errors.hpp"
#include "scenerylab/parallel.hpp"

namespace scenerylab {

TestFunction::TestFunction(std::string id, std::vector<std::pair<Real, Real>> breakpoints)
    : id_(std::move(id)), pts_(std::move(breakpoints)) {
  if (pts_.size() < 2 || pts_.front().first != -1 || pts_.back().first != 1) {
    throw ConfigError("test function " + id_ + ": breakpoints must span [-1, 1]");
  }
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    if (!(pts_[i].first > pts_[i - 1].first)) {
      throw ConfigError("test function " + id_ + ": breakpoints must increase");
    }
  }
}

TestFunction TestFunction::constant1() { return TestFunction("const1", {{-1, 1}, {1, 1}}); }

TestFunction TestFunction::identity() { return TestFunction("ident", {{-1, -1}, {1, 1}}); }

TestFunction TestFunction::trapezoid(Real c, Real eps) {
  if (!(eps > 0) || !(c >= -1) || !(c < 1)) throw ConfigError("trapezoid needs -1 <= c < 1 and eps > 0");
  const std::string id = "trap:" + toString(c, 17) + "," + toString(eps, 17);
  std::vector<std::pair<Real, Real>> pts{{-1, 1}};
  if (c > -1) pts.push_back({c, 1});
  if (c + eps < 1) {
    pts.push_back({c + eps, 0});
    pts.push_back({1, 0});
  } else {
    pts.push_back({1, 1 - (1 - c) / eps});
  }
  return TestFunction(id, std::move(pts));
}

Real TestFunction::operator()(Real u) const {
  if (u <= pts_.front().first) return pts_.front().second;
  if (u >= pts_.back().first) return pts_.back().second;
  auto it = std::upper_bound(pts_.begin(), pts_.end(), u,
                             [](Real v, const std::pair<Real, Real>& p) { return v < p.first; });
  const auto& [u1, v1] = *it;
  const auto& [u0, v0] = *(it - 1);
  return v0 + (v1 - v0) * (u - u0) / (u1 - u0);
}

Real TestFunction::lipschitz() const {
  Real lip = 0;
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    lip = rmax(lip, rabs(pts_[i].second - pts_[i - 1].second) / (pts_[i].first - pts_[i - 1].first));
  }
  return lip;
}

std::vector<TestFunction> standardFamily() {
  std::vector<TestFunction> family;
  for (int k = -3; k <= 3; ++k) family.push_back(TestFunction::trapezoid(Real(k) / 4, Real(1) / 32));
  family.push_back(TestFunction::constant1());
  family.push_back(TestFunction::identity());
  return family;
}

TestFunction leftHalfTrapezoid() { return TestFunction::trapezoid(Real(-1) / 2, Real(1) / 2); }

TestFunction parseTestFunction(const std::string& id) {
  if (id == "const1") return TestFunction::constant1();
  if (id == "ident") return TestFunction::identity();
  if (id.rfind("trap:", 0) == 0) {
    const std::string body = id.substr(5);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw ConfigError("test function '" + id + "': expected trap:c,eps");
    try {
      return TestFunction::trapezoid(parseReal(body.substr(0, comma)), parseReal(body.substr(comma + 1)));
    } catch (const std::invalid_argument&) {
      throw ConfigError("test function '" + id + "': bad number");
    }
  }
  throw ConfigError("unknown test function '" + id + "'");
}

// ---------------------------------------------------------------- scenery

SceneryMeasure::SceneryMeasure(MeasurePtr base, Real x, Real t) : base_(std::move(base)), x_(x), t_(t) {
  if (!base_) throw DomainError("scenery of a null measure");
  if (risnan(x) || risnan(t)) throw DomainError("scenery at NaN");
  r_ = zoomRadius(t);
  z_ = logMass(*base_, window(Interval::unit()));
  if (z_.isZero()) {
    throw EmptyWindow("window " + window(Interval::unit()).toString() + " has mass ZERO");
  }
  atomic_ = base_->isAtomic();
  if (atomic_) {
    const LogMass floor = z_ * LogMass::fromLog(-60 * kLn2);
    atoms_ = base_->atomsIn(window(Interval::unit()), floor);
    for (Atom& a : atoms_.atoms) a.position = (a.position - x_) / r_;
    if (!atoms_.restMass.isZero()) {
      atoms_.restLo = (atoms_.restLo - x_) / r_;
      atoms_.restHi = (atoms_.restHi - x_) / r_;
    }
    shares_.reserve(atoms_.atoms.size() + 1);
    for (const Atom& a : atoms_.atoms) shares_.push_back(rexp(logRatio(a.weight, z_)));
    shares_.push_back(atoms_.restMass.isZero() ? Real(0) : rexp(logRatio(atoms_.restMass, z_)));
  }
}

SceneryMeasure scenery(const MeasurePtr& m, Real x, Real t) { return SceneryMeasure(m, x, t); }

Real SceneryMeasure::logMassOf(const Interval& A) const {
  return logRatio(logMass(*base_, window(A.intersect(Interval::unit()))), z_);
}

double SceneryMeasure::mass(const Interval& A) const {
  return ratio(logMass(*base_, window(A.intersect(Interval::unit()))), z_);
}

double SceneryMeasure::cdf(Real u) const {
  if (u < -1) return 0.0;
  if (u >= 1) return 1.0;
  return mass(Interval::closed(-1, u));
}

double SceneryMeasure::integrate(const TestFunction& phi, double tol) const {
  if (!(tol > 0)) throw DomainError("integration tolerance must be positive");
  if (atomic_) return integrateAtoms(phi);
  if (base_->cdfIntegral(x_ - r_, x_ - r_, x_ - r_)) return integrateExact(phi);
  if (const auto* mix = dynamic_cast<const Mixture*>(base_.get())) {
    // Split into component sceneries weighted by their share of the window.
    Real total = 0;
    for (const auto& [w, m] : mix->components()) {
      const LogMass zk = logMass(*m, window(Interval::unit()));
      if (w.isZero() || zk.isZero()) continue;
      const double share = ratio(w * zk, z_);
      total += share * SceneryMeasure(m, x_, t_).integrate(phi, tol);
    }
    return toDouble(total);
  }
  return integrateQuadrature(phi, tol);
}

// phi(1) - sum_j s_j int_{u_j}^{u_{j+1}} F(u) du, with the integrals of F
// supplied by the model's primitive.
double SceneryMeasure::integrateExact(const TestFunction& phi) const {
  const auto& pts = phi.breakpoints();
  const Real L = x_ - r_;
  const Real logR = rlog(r_);
  Real value = pts.back().second;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    const Real s = (pts[j].second - pts[j - 1].second) / (pts[j].first - pts[j - 1].first);
    if (s == 0) continue;
    const auto k = base_->cdfIntegral(L, x_ + r_ * pts[j - 1].first, x_ + r_ * pts[j].first);
    if (k->isZero()) continue;
    value -= s * rexp(logRatio(*k, z_) - logR);
  }
  return toDouble(value);
}

double SceneryMeasure::integrateAtoms(const TestFunction& phi) const {
  Real value = 0;
  for (std::size_t i = 0; i < atoms_.atoms.size(); ++i) value += phi(atoms_.atoms[i].position) * shares_[i];
  if (!atoms_.restMass.isZero()) value += phi((atoms_.restLo + atoms_.restHi) / 2) * shares_.back();
  return toDouble(value);
}

namespace {

struct Quadrature {
  const SceneryMeasure& nu;
  // Segments this short are accepted outright. F is monotone with total
  // variation at most 1, so together they cost at most hMin.
  Real hMin;
  long evaluations = 0;
  static constexpr long kBudget = 400000;

  double F(Real u) {
    if (++evaluations > kBudget) throw ToleranceError("scenery quadrature: evaluation budget exhausted");
    return nu.cdf(u);
  }

  // int_a^b F with F monotone; fa, fm, fb at a, (a+b)/2, b.
  Real segment(Real a, Real b, double fa, double fm, double fb, Real tol, int depth) {
    const Real h = b - a;
    if ((fb - fa) * h <= tol || h <= hMin) return (Real(fa) + fb) / 2 * h;
    if (depth > 60) throw ToleranceError("scenery quadrature: depth cap reached");
    const Real m = (a + b) / 2;
    const double fl = F((a + m) / 2);
    const double fr = F((m + b) / 2);
    const Real whole = h / 6 * (Real(fa) + 4 * Real(fm) + fb);
    const Real halves = h / 12 * (Real(fa) + 4 * Real(fl) + 2 * Real(fm) + 4 * Real(fr) + fb);
    if (rabs(halves - whole) <= 15 * tol) {
      const Real v = halves + (halves - whole) / 15;
      return rmin(rmax(v, Real(fa) * h), Real(fb) * h);
    }
    return segment(a, m, fa, fl, fm, tol / 2, depth + 1) + segment(m, b, fm, fr, fb, tol / 2, depth + 1);
  }
};

}  // namespace

double SceneryMeasure::integrateQuadrature(const TestFunction& phi, double tol) const {
  const auto& pts = phi.breakpoints();
  std::size_t sloped = 0;
  Real maxSlope = 0;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    sloped += pts[j].second != pts[j - 1].second;
    maxSlope = rmax(maxSlope, rabs(pts[j].second - pts[j - 1].second) / (pts[j].first - pts[j - 1].first));
  }
  if (sloped == 0) return toDouble(pts.back().second);
  // Half of tol goes to the short-segment rule, half to the adaptive rule.
  Quadrature q{*this, Real(tol) / (2 * maxSlope * static_cast<Real>(sloped))};
  Real value = pts.back().second;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    const Real a = pts[j - 1].first;
    const Real b = pts[j].first;
    const Real s = (pts[j].second - pts[j - 1].second) / (b - a);
    if (s == 0) continue;
    const Real local = Real(tol) / (2 * rabs(s) * static_cast<Real>(sloped));
    const double fa = q.F(a);
    const double fb = q.F(b);
    const double fm = q.F((a + b) / 2);
    value -= s * q.segment(a, b, fa, fm, fb, local, 0);
  }
  return toDouble(value);
}

WindowCdf cdfOf(const SceneryMeasure& nu) {
  return [nu](Real u) { return nu.cdf(u); };
}

WindowCdf cdfOf(const std::vector<std::pair<Real, double>>& atoms) {
  auto sorted = atoms;
  std::sort(sorted.begin(), sorted.end());
  return [sorted](Real u) {
    double acc = 0;
    for (const auto& [p, w] : sorted) {
      if (p > u) break;
      acc += w;
    }
    return acc;
  };
}

double w1Distance(const WindowCdf& a, const WindowCdf& b, int grid) {
  if (grid < 1) throw DomainError("w1 grid must be positive");
  std::vector<double> diff(static_cast<std::size_t>(grid));
  parallelFor(diff.size(), [&](std::size_t i) {
    const Real u = -1 + 2 * Real(static_cast<long>(i)) / grid;
    diff[i] = std::fabs(a(u) - b(u));
  });
  double sum = 0;
  for (double d : diff) sum += d;
  return sum * (2.0 / grid);
}

std::vector<PathRow> sceneryDifferencePath(const MeasurePtr& m, const Diffeo& f, Real x,
                                           const std::vector<Real>& tGrid, const TestFunction& phi,
                                           double tol) {
  const MeasurePtr fm = std::make_shared<Pushforward>(m, f);
  const Real fx = f.forward(x);
  const Real s = f.timeShift(x);
  for (Real t : tGrid) {
    if (t - s < 0) throw DomainError("path time " + toString(t, 17) + " is below the shift " + toString(s, 17));
  }
  std::vector<PathRow> rows(tGrid.size());
  parallelFor(tGrid.size(), [&](std::size_t i) {
    const Real t = tGrid[i];
    const double a = SceneryMeasure(m, x, t).integrate(phi, tol);
    const double b = SceneryMeasure(fm, fx, t - s).integrate(phi, tol);
    rows[i] = {t, a, b, std::fabs(a - b)};
  });
  return rows;
}

}  // namespace scenerylab
