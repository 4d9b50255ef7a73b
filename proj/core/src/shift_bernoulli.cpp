#include "scenerylab/shift_bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bernoulli_kernel.hpp"
#include "scenerylab/errors.hpp"
#include "scenerylab/parallel.hpp"

namespace scenerylab {

// ---------------------------------------------------------------- weights

WeightFamily WeightFamily::dyadicLebesgue() {
  WeightFamily w;
  w.kind_ = Kind::DyadicLebesgue;
  return w;
}

WeightFamily WeightFamily::pN(int N) {
  if (N < 0) throw ConfigError("pN family needs N >= 0");
  WeightFamily w;
  w.kind_ = Kind::PN;
  w.n_ = N;
  // sum_{l > N} 1/l!, summed upward from the largest term.
  Real fact = 0;
  for (int l = N + 1;; ++l) {
    const Real term = rexp(-rlgamma(Real(l) + 1));
    fact += term;
    if (term < kRealEps * fact * 1e-3) break;
  }
  w.c_ = Real(1) / 2 / ((1 - rldexp(1, -N)) + fact);
  return w;
}

WeightFamily WeightFamily::finite(std::vector<Real> probabilities) {
  if (probabilities.size() < 2) throw ConfigError("finite weight list needs at least two entries");
  Real total = 0;
  for (Real p : probabilities) {
    if (!(p > 0)) throw ConfigError("finite weight list entries must be positive");
    total += p;
  }
  if (rabs(total - 1) > 1e-12) throw ConfigError("finite weight list must sum to 1");
  for (Real& p : probabilities) p /= total;
  WeightFamily w;
  w.kind_ = Kind::Finite;
  w.list_ = std::move(probabilities);
  return w;
}

std::string WeightFamily::name() const {
  switch (kind_) {
    case Kind::DyadicLebesgue: return "dyadic_lebesgue";
    case Kind::PN: return "pN";
    default: return "finite";
  }
}

Real WeightFamily::p(long l) const {
  switch (kind_) {
    case Kind::DyadicLebesgue: {
      const long n = l < 0 ? -l : l;
      if (n < 1) throw DomainError("symbol 0 does not exist");
      return rldexp(1, static_cast<int>(-(n + 1)));
    }
    case Kind::PN: {
      const long n = l < 0 ? -l : l;
      if (n < 1) throw DomainError("symbol 0 does not exist");
      if (n <= n_) return c_ * rldexp(1, static_cast<int>(-n));
      return c_ * rexp(-rlgamma(Real(n) + 1));
    }
    default:
      if (l < 0 || l >= size()) throw DomainError("symbol outside the finite alphabet");
      return list_[static_cast<std::size_t>(l)];
  }
}

Real WeightFamily::tailSum(long n) const {
  if (n < 0) n = 0;
  switch (kind_) {
    case Kind::DyadicLebesgue: return rldexp(1, static_cast<int>(-(n + 1)));
    case Kind::PN: {
      if (n < n_) return c_ * (rldexp(1, static_cast<int>(-n)) - rldexp(1, -n_)) + tailSum(n_);
      Real sum = 0;
      for (long l = n + 1;; ++l) {
        const Real term = rexp(-rlgamma(Real(l) + 1));
        sum += term;
        if (term == 0 || term < kRealEps * sum * 1e-3) break;
      }
      return c_ * sum;
    }
    default: {
      Real sum = 0;
      for (long l = std::max(0L, n + 1); l < size(); ++l) sum += list_[static_cast<std::size_t>(l)];
      return sum;
    }
  }
}

// ---------------------------------------------------------------- shift map

ShiftSystem ShiftSystem::finiteUniform(long m) {
  if (m < 2) throw ConfigError("finite shift needs at least two branches");
  return ShiftSystem(Kind::FiniteUniform, m);
}

ShiftSystem ShiftSystem::forWeights(const WeightFamily& w) {
  return w.isSigned() ? signedDyadic() : finiteUniform(w.size());
}

bool ShiftSystem::isSymbol(long l) const {
  if (kind_ == Kind::SignedDyadic) return l != 0 && l > -16000 && l < 16000;
  return l >= 0 && l < m_;
}

Interval ShiftSystem::basic(long l) const {
  if (!isSymbol(l)) throw DomainError("invalid symbol " + std::to_string(l));
  if (kind_ == Kind::SignedDyadic) {
    const int n = static_cast<int>(l < 0 ? -l : l);
    const Real lo = rldexp(1, -n);
    const Real hi = rldexp(1, 1 - n);
    return l > 0 ? Interval::closed(lo, hi) : Interval::closed(-hi, -lo);
  }
  return Interval::closed(-1 + Real(2 * l) / m_, -1 + Real(2 * (l + 1)) / m_);
}

Real ShiftSystem::expansion(long l) const {
  if (!isSymbol(l)) throw DomainError("invalid symbol " + std::to_string(l));
  if (kind_ == Kind::SignedDyadic) return rldexp(1, static_cast<int>((l < 0 ? -l : l) + 1));
  return Real(m_);
}

Real ShiftSystem::sigma(long l, Real y) const {
  if (kind_ == Kind::SignedDyadic) {
    const int n = static_cast<int>(l < 0 ? -l : l);
    return rldexp(y, n + 1) + (l < 0 ? 3 : -3);
  }
  return (y + 1) * m_ - Real(2 * l + 1);
}

Real ShiftSystem::sigmaInverse(long l, Real y) const {
  if (!isSymbol(l)) throw DomainError("invalid symbol " + std::to_string(l));
  if (kind_ == Kind::SignedDyadic) {
    const int n = static_cast<int>(l < 0 ? -l : l);
    return rldexp(y + (l < 0 ? -3 : 3), -(n + 1));
  }
  return (y + Real(2 * l + 1)) / m_ - 1;
}

std::optional<long> ShiftSystem::digitOf(Real y) const {
  if (!(y > -1 && y < 1)) return std::nullopt;
  long l;
  if (kind_ == Kind::SignedDyadic) {
    if (y == 0) return std::nullopt;
    int e = 0;
    rfrexp(rabs(y), &e);
    const long n = std::max(1L, static_cast<long>(1 - e));
    if (n >= 16000) return std::nullopt;
    l = y < 0 ? -n : n;
  } else {
    l = std::clamp(static_cast<long>(rfloor((y + 1) * m_ / 2)), 0L, m_ - 1);
  }
  const Interval b = basic(l);
  if (!(y > b.lo && y < b.hi)) return std::nullopt;
  return l;
}

Interval cylinder(const ShiftSystem& sys, const std::vector<long>& digits) {
  Interval J = Interval::unit();
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    J = Interval::closed(sys.sigmaInverse(*it, J.lo), sys.sigmaInverse(*it, J.hi));
  }
  return J;
}

// ---------------------------------------------------------------- measure

namespace {

constexpr int kExactDepth = 4000;
constexpr int kFastDepth = 1000;

LogMass toLogMass(const Scaled<Real>& s) {
  if (!(s.value > 0)) return LogMass::zero();
  return LogMass::fromLog(s.logScale + rlog(s.value));
}

}  // namespace

BernoulliMeasure::BernoulliMeasure(WeightFamily w)
    : w_(std::move(w)),
      sys_(ShiftSystem::forWeights(w_)),
      exact_(std::make_shared<BernoulliKernel<Real>>(w_, kExactDepth)),
      fast_(std::make_shared<BernoulliKernel<double>>(w_, kFastDepth)) {}

BernoulliMeasure::~BernoulliMeasure() = default;

Real BernoulliMeasure::mean() const { return exact_->mean(); }

LogMass BernoulliMeasure::logMass(const Interval& J) const {
  Real err = 0;
  return logMass(J, err);
}

LogMass BernoulliMeasure::logMass(const Interval& J, Real& err) const {
  err = 0;
  if (J.isEmpty()) return LogMass::zero();
  const Scaled<Real> s = exact_->mass(J.lo, J.hi, err);
  err = s.value > 0 ? err / s.value : (err > 0 ? kRealInf : Real(0));
  return toLogMass(s);
}

LogMass bernoulliLogMass(const BernoulliMeasure& m, const Interval& J, Real tol) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  if (J.isEmpty()) return LogMass::zero();
  Real err = 0;
  const LogMass v = m.logMass(J, err);
  if (err > tol) {
    throw ToleranceError("bernoulli mass not certified to the requested tolerance");
  }
  return v;
}

std::optional<LogMass> BernoulliMeasure::cdfIntegral(Real L, Real y0, Real y1) const {
  // int_{y0}^{y1} mu([L, y]) dy = (y1 - y0) mu([L, y0]) + int_{(y0, y1]} (y1 - p) dmu,
  // with mu constant beyond 1 and zero below -1.
  LogMass total;
  Real err = 0;
  L = rmax(L, -1);
  if (y1 > 1) {
    const Real lo = rmax(y0, 1);
    total = LogMass::fromMass(y1 - lo) * toLogMass(exact_->mass(L, 1, err));
    y1 = 1;
  }
  y0 = rmax(y0, -1);
  if (y1 > y0) {
    total = logSumExp(total, LogMass::fromMass(y1 - y0) * toLogMass(exact_->mass(L, y0, err)));
    total = logSumExp(total, toLogMass(exact_->k(y0, y1, err)));
  }
  return total;
}

// ---------------------------------------------------------------- return times

namespace {

Real t0(Real y) { return -rlog(rmin(1 + y, 1 - y)); }

}  // namespace

Real returnTime(const ShiftSystem& sys, Real x, int k) {
  if (k < 0) throw DomainError("return time index must be nonnegative");
  if (!(x > -1 && x < 1)) return kRealInf;
  Real acc = 0;
  Real y = x;
  for (int i = 0; i < k; ++i) {
    const auto l = sys.digitOf(y);
    if (!l) return kRealInf;
    acc += rlog(sys.expansion(*l));
    y = sys.sigma(*l, y);
  }
  return acc + t0(y);
}

// ---------------------------------------------------------------- sampling

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Cumulative symbol law: positive magnitudes for the signed families (each
// sign with probability 1/2), branch indices for finite lists.
std::vector<double> cumulative(const WeightFamily& w) {
  std::vector<double> cum;
  double acc = 0;
  if (w.isSigned()) {
    for (long n = 1; n <= kFastDepth; ++n) {
      acc += 2 * toDouble(w.p(n));
      cum.push_back(acc);
      if (acc >= 1) break;
    }
  } else {
    for (Real p : w.list()) {
      acc += toDouble(p);
      cum.push_back(acc);
    }
  }
  return cum;
}

long drawSymbol(const WeightFamily& w, const std::vector<double>& cum, SplitMix64& rng) {
  double u = rng.uniform();
  bool negative = false;
  if (w.isSigned()) {
    negative = u < 0.5;
    u = negative ? 2 * u : 2 * u - 1;
  }
  const auto it = std::upper_bound(cum.begin(), cum.end(), u * cum.back());
  long idx = static_cast<long>(it - cum.begin());
  idx = std::min<long>(idx, static_cast<long>(cum.size()) - 1);
  if (!w.isSigned()) return idx;
  return negative ? -(idx + 1) : idx + 1;
}

}  // namespace

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed ^ 0x6A09E667F3BCC909ULL) ^ mix64(stream + 0x9E3779B97F4A7C15ULL)) {}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<long> sampleDigits(const WeightFamily& w, SplitMix64& rng, int count) {
  if (count < 1) throw DomainError("digit count must be positive");
  const auto cum = cumulative(w);
  std::vector<long> digits(static_cast<std::size_t>(count));
  for (auto& d : digits) d = drawSymbol(w, cum, rng);
  return digits;
}

Real digitsToPoint(const ShiftSystem& sys, const std::vector<long>& digits) {
  Real y = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) y = sys.sigmaInverse(*it, y);
  return y;
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

struct Segment {
  double u0, u1, slope;
};

struct PhiPlan {
  double endValue;
  std::vector<Segment> segments;
};

// a / b for scaled values.
double scaledRatio(const Scaled<double>& a, const Scaled<double>& b) {
  if (a.value == 0) return 0.0;
  return std::exp(a.logScale - b.logScale) * (a.value / b.value);
}

Scaled<double> scaledSum(const Scaled<double>& a, const Scaled<double>& b) {
  if (a.value == 0) return b;
  if (b.value == 0) return a;
  const double s = std::max(a.logScale, b.logScale);
  return {s, a.value * std::exp(a.logScale - s) + b.value * std::exp(b.logScale - s)};
}

}  // namespace

MomentReport generatedDistributionMoments(const BernoulliMeasure& m, const std::vector<TestFunction>& family,
                                          const MonteCarloConfig& cfg) {
  if (cfg.samples < 2) throw DomainError("Monte Carlo needs at least two samples");
  if (cfg.depth < 2) throw DomainError("digit depth must be at least 2");
  if (!(cfg.tStep > 0)) throw DomainError("t-grid step must be positive");
  const auto& kernel = m.fastKernel();
  const ShiftSystem& sys = m.system();
  const auto cum = cumulative(m.weights());

  std::vector<PhiPlan> plans;
  for (const TestFunction& phi : family) {
    PhiPlan plan{toDouble(phi.breakpoints().back().second), {}};
    const auto& pts = phi.breakpoints();
    for (std::size_t j = 1; j < pts.size(); ++j) {
      const Real s = (pts[j].second - pts[j - 1].second) / (pts[j].first - pts[j - 1].first);
      if (s != 0) plan.segments.push_back({toDouble(pts[j - 1].first), toDouble(pts[j].first), toDouble(s)});
    }
    plans.push_back(std::move(plan));
  }

  const std::size_t n = static_cast<std::size_t>(cfg.samples);
  const std::size_t nf = family.size();
  std::vector<double> sums(n * nf, 0.0);
  std::vector<long> counts(n, 0);
  std::vector<double> gaps(n, 0.0), t0s(n, 0.0);
  const double h = cfg.tStep;

  parallelFor(n, [&](std::size_t i) {
    SplitMix64 rng(cfg.seed, i);
    std::vector<long> digits(static_cast<std::size_t>(cfg.depth));
    for (auto& d : digits) d = drawSymbol(m.weights(), cum, rng);
    // x and sigma(x), built from the inside out.
    double y = 0;
    for (std::size_t k = digits.size(); k-- > 1;) y = toDouble(sys.sigmaInverse(digits[k], y));
    const double sx = y;
    const double x = toDouble(sys.sigmaInverse(digits[0], y));
    const double T0 = -std::log1p(-std::fabs(x));
    const double T1 = toDouble(rlog(sys.expansion(digits[0]))) - std::log1p(-std::fabs(sx));
    gaps[i] = T1 - T0;
    t0s[i] = T0;
    const double theta = rng.uniform();
    double* row = &sums[i * nf];
    long count = 0;
    for (long j = 0;; ++j) {
      const double t = T0 + (theta + static_cast<double>(j)) * h;
      if (!(t < T1)) break;
      ++count;
      const double r = std::exp(-t);
      const double L = x - r;
      double err = 0;
      const Scaled<double> Z = kernel.mass(L, x + r, err);
      if (Z.value == 0) continue;
      for (std::size_t f = 0; f < nf; ++f) {
        double value = plans[f].endValue;
        for (const Segment& s : plans[f].segments) {
          const double y0 = x + r * s.u0;
          const double y1 = x + r * s.u1;
          Scaled<double> mass = kernel.mass(L, y0, err);
          mass.value *= (y1 - y0);
          const Scaled<double> kint = scaledSum(mass, kernel.k(y0, y1, err));
          value -= s.slope * scaledRatio(kint, Z) / r;
        }
        row[f] += value;
      }
    }
    counts[i] = count;
  });

  MomentReport report;
  double totalCount = 0;
  for (long c : counts) totalCount += static_cast<double>(c);
  if (totalCount == 0) throw DomainError("Monte Carlo grid produced no samples");
  const double meanCount = totalCount / static_cast<double>(n);
  for (std::size_t f = 0; f < nf; ++f) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) total += sums[i * nf + f];
    const double R = total / totalCount;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = sums[i * nf + f] - R * static_cast<double>(counts[i]);
      ss += d * d;
    }
    const double var = ss / (static_cast<double>(n) * static_cast<double>(n - 1)) / (meanCount * meanCount);
    report.moments.push_back({family[f].id(), R, std::sqrt(var), cfg.samples});
  }

  double gapAll = 0, gapHalf = 0, t0Sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    gapAll += gaps[i];
    if (i < n / 2) gapHalf += gaps[i];
    t0Sum += t0s[i];
  }
  report.meanReturnGap = gapAll / static_cast<double>(n);
  gapHalf /= static_cast<double>(n / 2);
  report.integrabilityWarning = std::fabs(report.meanReturnGap - gapHalf) > 0.01 * std::fabs(report.meanReturnGap);
  report.meanT0 = t0Sum / static_cast<double>(n);
  double t0ss = 0;
  for (double v : t0s) t0ss += (v - report.meanT0) * (v - report.meanT0);
  report.stderrT0 = std::sqrt(t0ss / (static_cast<double>(n) * static_cast<double>(n - 1)));
  return report;
}

// ---------------------------------------------------------------- closed forms

double endpointMass(const WeightFamily& w, int m, int n) {
  if (!w.isSigned()) throw DomainError("endpoint mass needs a signed weight family");
  if (m < 0 || n < 1) throw DomainError("endpoint mass needs m >= 0 and n >= 1");
  const Real logNum = m * rlog(w.p(1)) + rlog(w.p(n));
  const Real logTail = rlog(w.tailSum(n));
  // p1^m p_n / (2 (p1^m p_n + tail)) = 1 / (2 (1 + tail / (p1^m p_n)))
  return toDouble(1 / (2 * (1 + rexp(logTail - logNum))));
}

double dimensionFormula(const WeightFamily& w) {
  if (!w.isSigned()) {
    Real h = 0;
    for (Real p : w.list()) h -= p * rlog(p);
    return toDouble(h / rlog(Real(w.size())));
  }
  Real num = 0, den = 0;
  for (long l = 1;; ++l) {
    const Real p = w.p(l);
    const Real tn = p == 0 ? Real(0) : p * rlog(p);
    const Real td = (l + 1) * p;
    num += tn;
    den += td;
    if (rabs(tn) < 1e-16 * rabs(num) && td < 1e-16 * den) break;
    if (l > 1000000) throw DivergenceError("dimension series did not converge");
  }
  return toDouble(-num / (kLn2 * den));
}

}  // namespace scenerylab
