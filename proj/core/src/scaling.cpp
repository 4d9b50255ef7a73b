#include "scenerylab/scaling.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "scenerylab/errors.hpp"
#include "scenerylab/parallel.hpp"

namespace scenerylab {

std::vector<Real> timeGrid(Real T, Real step) {
  if (!(T > 0) || !(step > 0)) throw DomainError("time grid needs T > 0 and step > 0");
  const long n = static_cast<long>(rfloor(T / step + Real(1e-9)));
  std::vector<Real> t(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) t[static_cast<std::size_t>(k)] = k * step;
  return t;
}

ScalingDistribution::ScalingDistribution(MeasurePtr m, Real x, Real T, Real step, Real shift)
    : m_(std::move(m)), x_(x), T_(T), step_(step), shift_(shift), times_(timeGrid(T, step)) {
  if (!m_) throw DomainError("scaling distribution of a null measure");
}

SceneryMeasure ScalingDistribution::sample(std::size_t k) const {
  if (!valid(k)) throw DomainError("scaling sample before the time shift");
  return SceneryMeasure(m_, x_, times_[k] - shift_);
}

std::vector<double> ScalingDistribution::functionalValues(const TestFunction& phi, double tol) const {
  std::vector<double> v(size(), std::numeric_limits<double>::quiet_NaN());
  parallelFor(size(), [&](std::size_t k) {
    if (valid(k)) v[k] = sample(k).integrate(phi, tol);
  });
  return v;
}

std::vector<std::vector<double>> ScalingDistribution::functionalValues(const std::vector<TestFunction>& family,
                                                                      double tol) const {
  std::vector<std::vector<double>> v(family.size(),
                                     std::vector<double>(size(), std::numeric_limits<double>::quiet_NaN()));
  parallelFor(size(), [&](std::size_t k) {
    if (!valid(k)) return;
    const SceneryMeasure nu = sample(k);
    for (std::size_t p = 0; p < family.size(); ++p) v[p][k] = nu.integrate(family[p], tol);
  });
  return v;
}

double ScalingDistribution::moment(const TestFunction& phi, double tol) const {
  const auto v = functionalValues(phi, tol);
  double sum = 0;
  long n = 0;
  for (double x : v) {
    if (std::isnan(x)) continue;
    sum += x;
    ++n;
  }
  if (n == 0) throw EmptyWindow("no valid samples in the scaling distribution");
  return sum / static_cast<double>(n);
}

ScalingDistribution pushforwardScaling(const MeasurePtr& m, const Diffeo& f, Real x, Real T, Real step) {
  return ScalingDistribution(std::make_shared<Pushforward>(m, f), f.forward(x), T, step, f.timeShift(x));
}

double distributionGap(const ScalingDistribution& d1, const ScalingDistribution& d2,
                       const std::vector<TestFunction>& family, std::vector<GapRow>* rows, double tol) {
  if (d1.size() != d2.size() || d1.step() != d2.step()) {
    throw GridMismatch("scaling distributions live on different time grids");
  }
  double gap = 0;
  const auto va = d1.functionalValues(family, tol);
  const auto vb = d2.functionalValues(family, tol);
  for (std::size_t p = 0; p < family.size(); ++p) {
    const TestFunction& phi = family[p];
    const auto& a = va[p];
    const auto& b = vb[p];
    double sa = 0, sb = 0;
    long n = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (std::isnan(a[k]) || std::isnan(b[k])) continue;
      sa += a[k];
      sb += b[k];
      ++n;
    }
    if (n == 0) throw EmptyWindow("no grid point is valid in both distributions");
    const double ma = sa / static_cast<double>(n);
    const double mb = sb / static_cast<double>(n);
    const double g = std::fabs(ma - mb);
    if (rows) rows->push_back({phi.id(), ma, mb, g});
    gap = std::max(gap, g);
  }
  return gap;
}

namespace {

// log(mu(x + gamma I_t) / mu(x + I_t)) on the grid.
std::vector<Real> logWindowRatios(const MeasurePtr& m, Real x, Real gamma, const std::vector<Real>& t) {
  std::vector<Real> out(t.size());
  parallelFor(t.size(), [&](std::size_t k) {
    const Real r = zoomRadius(t[k]);
    const LogMass inner = logMass(*m, Interval::closed(x - r, x + r));
    if (inner.isZero()) throw EmptyWindow("window at t = " + toString(t[k], 17) + " has mass ZERO");
    const LogMass outer = logMass(*m, Interval::closed(x - gamma * r, x + gamma * r));
    out[k] = logRatio(outer, inner);
  });
  return out;
}

void checkTcArgs(Real gamma, Real K) {
  if (!(gamma > 1)) throw DomainError("gamma must exceed 1");
  if (!(K > 1)) throw DomainError("K must exceed 1");
}

}  // namespace

double tcDensity(const MeasurePtr& m, Real x, Real gamma, Real K, Real T, Real step) {
  checkTcArgs(gamma, K);
  const auto t = timeGrid(T, step);
  const auto lr = logWindowRatios(m, x, gamma, t);
  const Real logK = rlog(K);
  long hits = 0;
  for (Real v : lr) hits += v >= logK;
  return static_cast<double>(hits) / static_cast<double>(lr.size());
}

double bGammaDensity(const MeasurePtr& m, Real x, Real gamma, Real T, Real step) {
  return tcDensity(m, x, gamma, 2, T, step);
}

std::vector<TcRow> tcReport(const MeasurePtr& m, Real x, const std::vector<Real>& gammas,
                            const std::vector<Real>& Ks, const std::vector<Real>& Ts, Real step) {
  std::vector<TcRow> rows;
  Real Tmax = 0;
  for (Real T : Ts) Tmax = rmax(Tmax, T);
  const auto t = timeGrid(Tmax, step);
  for (Real gamma : gammas) {
    for (Real K : Ks) checkTcArgs(gamma, K);
    const auto lr = logWindowRatios(m, x, gamma, t);
    for (Real K : Ks) {
      const Real logK = rlog(K);
      for (Real T : Ts) {
        const std::size_t n = timeGrid(T, step).size();
        long hits = 0;
        for (std::size_t k = 0; k < n; ++k) hits += lr[k] >= logK;
        rows.push_back({toDouble(gamma), toDouble(K), toDouble(T),
                        static_cast<double>(hits) / static_cast<double>(n)});
      }
    }
  }
  return rows;
}

std::vector<DimensionRow> dimensionProfile(const MeasurePtr& m, Real x, Real rMin, Real rMax, int points) {
  if (!(rMin > 0) || !(rMax > rMin) || !(rMax < 1)) throw DomainError("dimension profile needs 0 < rMin < rMax < 1");
  if (points < 2) throw DomainError("dimension profile needs at least two radii");
  std::vector<DimensionRow> rows(static_cast<std::size_t>(points));
  const Real a = rlog(rMin);
  const Real b = rlog(rMax);
  parallelFor(rows.size(), [&](std::size_t i) {
    const Real r = rexp(a + (b - a) * Real(static_cast<long>(i)) / (points - 1));
    const LogMass mass = logMass(*m, Interval::closed(x - r, x + r));
    if (mass.isZero()) throw EmptyWindow("ball of radius " + toString(r, 17) + " has mass ZERO");
    const Real logR = rlog(r);
    Real ratio;
    if (mass.level() == 2 && mass.value() > LogMass::kLevel1Limit) {
      // log mu = -exp(u) overflows; the ratio is exp(u - log(-log r)).
      ratio = rexp(mass.value() - rlog(-logR));
    } else {
      ratio = mass.logValue() / logR;
    }
    rows[i] = {r, mass, ratio};
  });
  return rows;
}

Real upperLocalDimension(const MeasurePtr& m, Real x, Real rMin, Real rMax, int points) {
  Real best = -kRealInf;
  for (const auto& row : dimensionProfile(m, x, rMin, rMax, points)) best = rmax(best, row.ratio);
  return best;
}

}  // namespace scenerylab
