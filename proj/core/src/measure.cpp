#include "scenerylab/measure.hpp"

#include <algorithm>

#include "scenerylab/errors.hpp"

namespace scenerylab {

AtomSet MeasureModel::atomsIn(const Interval&, const LogMass&) const {
  throw DomainError(type() + " is not atomic");
}

std::optional<LogMass> MeasureModel::cdfIntegral(Real, Real, Real) const { return std::nullopt; }

LogMass logMass(const MeasureModel& m, const Interval& J) {
  if (!J.isWellFormed()) throw DomainError("interval with NaN endpoint");
  if (J.isEmpty()) return LogMass::zero();
  return m.logMass(J);
}

double massRatio(const MeasureModel& m, const Interval& num, const Interval& den) {
  const LogMass d = logMass(m, den);
  if (d.isZero()) throw ZeroDenominator("mass ratio over a window of mass ZERO");
  return ratio(logMass(m, num), d);
}

// ---------------------------------------------------------------- atoms

GeometricAtoms::GeometricAtoms(Real base, Real weightRatio) : b_(base), w_(weightRatio) {
  if (!(base > 0 && base < 1)) throw DomainError("geometric atoms: base must lie in (0, 1)");
  if (!(weightRatio > 1)) throw DomainError("geometric atoms: weight ratio must exceed 1");
  logB_ = rlog(b_);
  logW_ = rlog(w_);
}

Real GeometricAtoms::position(long k) const {
  if (b_ == Real(0.5)) return rldexp(1, static_cast<int>(-k));
  return rpow(b_, k);
}

bool GeometricAtoms::indexRange(const Interval& J, long& first, long& last) const {
  if (J.isEmpty() || !(J.hi > 0)) return false;
  auto belowHi = [&](long k) { return J.hiClosed ? position(k) <= J.hi : position(k) < J.hi; };
  auto aboveLo = [&](long k) { return J.loClosed ? position(k) >= J.lo : position(k) > J.lo; };

  // b^k <= hi  iff  k >= log(hi) / log(b)
  long k0 = 1;
  if (J.hi < b_) {
    const Real est = rceil(rlog(J.hi) / logB_);
    k0 = est > 1e15 ? -1 : std::max(1L, static_cast<long>(est));
    if (k0 < 0) return false;
  }
  while (k0 > 1 && belowHi(k0 - 1)) --k0;
  while (!belowHi(k0)) ++k0;
  first = k0;

  if (J.lo <= 0) {
    last = -1;
    return true;
  }
  const Real est = rfloor(rlog(J.lo) / logB_);
  if (est < 1) {
    if (!aboveLo(1)) return false;
  }
  long k1 = std::max(0L, static_cast<long>(est));
  while (aboveLo(k1 + 1)) ++k1;
  while (k1 >= 1 && !aboveLo(k1)) --k1;
  last = k1;
  return last >= first;
}

LogMass GeometricAtoms::rangeMass(long first, long last) const {
  Real l = -static_cast<Real>(first) * logW_ - rlog1p(-1 / w_);
  if (last >= 0) {
    const Real n = static_cast<Real>(last - first + 1);
    l += log1mexp(n * logW_);
  }
  return LogMass::fromLog(l);
}

LogMass GeometricAtoms::tailLogMass(long n) const { return rangeMass(std::max(1L, n + 1), -1); }

LogMass GeometricAtoms::logMass(const Interval& J) const {
  long first = 0, last = 0;
  if (!indexRange(J, first, last)) return LogMass::zero();
  return rangeMass(first, last);
}

AtomSet GeometricAtoms::atomsIn(const Interval& J, const LogMass& floor) const {
  AtomSet out;
  long first = 0, last = 0;
  if (!indexRange(J, first, last)) return out;
  // Atoms with weight >= floor are k <= kCut.
  long kCut = last;
  if (!floor.isZero()) {
    const Real c = rfloor(-floor.logValue() / logW_);
    kCut = c > 1e7 ? 10000000L : static_cast<long>(c);
    if (last >= 0) kCut = std::min(kCut, last);
  } else if (last < 0) {
    throw DomainError("geometric atoms: infinitely many atoms requested without a floor");
  }
  for (long k = kCut; k >= first; --k) out.atoms.push_back({position(k), LogMass::fromLog(-k * logW_)});
  const long restFirst = std::max(first, kCut + 1);
  if (last < 0 || restFirst <= last) {
    out.restMass = rangeMass(restFirst, last);
    out.restLo = last < 0 ? Real(0) : position(last);
    out.restHi = position(restFirst);
  }
  return out;
}

AtomList::AtomList(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const Atom& a : atoms_) {
    if (!risfinite(a.position)) throw DomainError("atom list: non-finite position");
  }
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& a, const Atom& b) { return a.position < b.position; });
}

LogMass AtomList::logMass(const Interval& J) const {
  LogMass total;
  if (J.isEmpty()) return total;
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), J.lo,
                             [](const Atom& a, Real y) { return a.position < y; });
  for (; it != atoms_.end() && it->position <= J.hi; ++it) {
    if (J.contains(it->position)) total = logSumExp(total, it->weight);
  }
  return total;
}

AtomSet AtomList::atomsIn(const Interval& J, const LogMass& floor) const {
  AtomSet out;
  if (J.isEmpty()) return out;
  bool anyRest = false;
  for (const Atom& a : atoms_) {
    if (!J.contains(a.position)) continue;
    if (a.weight >= floor) {
      out.atoms.push_back(a);
      continue;
    }
    out.restMass = logSumExp(out.restMass, a.weight);
    out.restLo = anyRest ? rmin(out.restLo, a.position) : a.position;
    out.restHi = anyRest ? rmax(out.restHi, a.position) : a.position;
    anyRest = true;
  }
  return out;
}

// ---------------------------------------------------------------- cdf pairs

LogMass CdfPair::logMass(const Interval& J) const {
  LogMass total;
  if (J.isEmpty()) return total;
  if (J.lo < 0) {
    const Real a = J.hi < 0 ? -J.hi : Real(0);
    const Real b = -J.lo;
    total = a == 0 ? leftCdf(b) : leftBetween(a, b);
  }
  if (J.hi > 0) {
    const Real a = J.lo > 0 ? J.lo : Real(0);
    const Real b = J.hi;
    total = logSumExp(total, a == 0 ? rightCdf(b) : rightBetween(a, b));
  }
  return total;
}

LogMass CdfPair::rightBetween(Real a, Real b) const {
  if (!(b > a)) return LogMass::zero();
  bool cancelled = false;
  return logDiffExp(rightCdf(b), rightCdf(a), &cancelled);
}

LogMass CdfPair::leftBetween(Real a, Real b) const {
  if (!(b > a)) return LogMass::zero();
  bool cancelled = false;
  return logDiffExp(leftCdf(b), leftCdf(a), &cancelled);
}

LogMass LebesgueCdf::rightCdf(Real x) const {
  if (!(x > 0)) return LogMass::zero();
  return LogMass::fromLog(rlog(x));
}

LogMass LebesgueCdf::rightBetween(Real a, Real b) const {
  if (!(b > a)) return LogMass::zero();
  return LogMass::fromLog(rlog(b - a));
}

std::optional<LogMass> LebesgueCdf::cdfIntegral(Real L, Real y0, Real y1) const {
  if (!(y1 > y0)) return LogMass::zero();
  // ((y1 - L)^2 - (y0 - L)^2) / 2
  return LogMass::fromMass((y1 - y0) * ((y1 - L) + (y0 - L)) / 2);
}

namespace {

// log(exp(-1/b) - exp(-1/a)) for 0 < a < b.
LogMass expCdfBetween(Real a, Real b) {
  if (!(b > a) || !(b > 0)) return LogMass::zero();
  if (!(a > 0)) return LogMass::fromLog(-1 / b);
  const Real d = risinf(b) ? 1 / a : (b - a) / (a * b);
  return LogMass::fromLog(-1 / b + log1mexp(d));
}

}  // namespace

LogMass ExpCdf::rightCdf(Real x) const {
  if (!(x > 0)) return LogMass::zero();
  return LogMass::fromLog(-1 / x);
}

LogMass ExpCdf::rightBetween(Real a, Real b) const { return expCdfBetween(a, b); }

LogMass OneSidedExpCdf::rightCdf(Real x) const {
  if (!(x > 0)) return LogMass::zero();
  return LogMass::fromLog(-1 / x);
}

LogMass OneSidedExpCdf::rightBetween(Real a, Real b) const { return expCdfBetween(a, b); }

namespace {

// exp(-e^{ub}) (1 - exp(-(e^{ua} - e^{ub}))) with ua - ub = delta > 0.
LogMass doubleExpBetween(Real ub, Real delta) {
  if (!(delta > 0)) return LogMass::zero();
  const Real logD = ub + rlog(rexpm1(delta));
  const Real tail = logD > 12 ? Real(0) : log1mexp(rexp(logD));
  return LogMass::fromLevel2(ub) * LogMass::fromLog(tail);
}

const Real kHalf = Real(1) / 2;

}  // namespace

LogMass DoubleExpPair::rightCdf(Real x) const {
  if (!(x > 0)) return LogMass::zero();
  return LogMass::fromLevel2(hExponent(rmin(x, kHalf)));
}

LogMass DoubleExpPair::leftCdf(Real x) const {
  if (!(x > 0)) return LogMass::zero();
  return LogMass::fromLevel2(gExponent(rmin(x, kHalf)));
}

LogMass DoubleExpPair::rightBetween(Real a, Real b) const {
  b = rmin(b, kHalf);
  if (!(b > a)) return LogMass::zero();
  if (!(a > 0)) return rightCdf(b);
  // 1/(a + a^2) - 1/(b + b^2)
  const Real delta = (b - a) * (1 + a + b) / ((a + a * a) * (b + b * b));
  return doubleExpBetween(hExponent(b), delta);
}

LogMass DoubleExpPair::leftBetween(Real a, Real b) const {
  b = rmin(b, kHalf);
  if (!(b > a)) return LogMass::zero();
  if (!(a > 0)) return leftCdf(b);
  // 1/(a - a^2) - 1/(b - b^2)
  const Real delta = (b - a) * (1 - a - b) / ((a - a * a) * (b - b * b));
  return doubleExpBetween(gExponent(b), delta);
}

// ---------------------------------------------------------------- composites

namespace {

// An atom whose image lies within rounding of an endpoint y is placed on the
// correct side by the sign of f^{-1}(y) - a, computed as (y - a) + offset.
void settleEndpoint(const MeasureModel& base, const Diffeo& f, Real y, bool isLo, Interval& pre) {
  Real& e = isLo ? pre.lo : pre.hi;
  bool& closed = isLo ? pre.loClosed : pre.hiClosed;
  if (e == 0 || !risfinite(e)) return;
  const Real slack = rabs(e) * 64 * kRealEps;
  const AtomSet near = base.atomsIn(Interval::closed(e - slack, e + slack), LogMass::zero());
  for (const Atom& a : near.atoms) {
    const Real d = (y - a.position) + f.inverseOffset(y);
    const bool inside = d == 0 ? closed : (isLo ? d < 0 : d > 0);
    if (inside == pre.contains(a.position)) continue;
    e = a.position;
    closed = inside;
  }
}

}  // namespace

Interval Pushforward::preimage(const Interval& J) const {
  if (J.isEmpty()) return Interval::empty();
  Interval pre{f_.inverse(J.lo), f_.inverse(J.hi), J.loClosed, J.hiClosed};
  if (base_->isAtomic()) {
    settleEndpoint(*base_, f_, J.lo, true, pre);
    settleEndpoint(*base_, f_, J.hi, false, pre);
  }
  return pre;
}

LogMass Pushforward::logMass(const Interval& J) const {
  if (J.isEmpty()) return LogMass::zero();
  return base_->logMass(preimage(J));
}

AtomSet Pushforward::atomsIn(const Interval& J, const LogMass& floor) const {
  AtomSet s = base_->atomsIn(preimage(J), floor);
  for (Atom& a : s.atoms) a.position = f_.forward(a.position);
  if (!s.restMass.isZero()) {
    s.restLo = f_.forward(s.restLo);
    s.restHi = f_.forward(s.restHi);
  }
  return s;
}

std::optional<LogMass> Pushforward::cdfIntegral(Real L, Real y0, Real y1) const {
  const auto ab = f_.affineCoefficients();
  if (!ab) return std::nullopt;
  const auto inner = base_->cdfIntegral(f_.inverse(L), f_.inverse(y0), f_.inverse(y1));
  if (!inner) return std::nullopt;
  return *inner * LogMass::fromLog(rlog(ab->first));
}

Mixture::Mixture(std::vector<std::pair<LogMass, MeasurePtr>> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("mixture without components");
  for (const auto& c : components_) {
    if (!c.second) throw DomainError("mixture component is null");
  }
}

LogMass Mixture::logMass(const Interval& J) const {
  LogMass total;
  for (const auto& [w, m] : components_) total = logSumExp(total, w * m->logMass(J));
  return total;
}

bool Mixture::isAtomic() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const auto& c) { return c.second->isAtomic(); });
}

AtomSet Mixture::atomsIn(const Interval& J, const LogMass& floor) const {
  AtomSet out;
  bool anyRest = false;
  for (const auto& [w, m] : components_) {
    if (w.isZero()) continue;
    LogMass f = floor;
    if (!floor.isZero()) f = LogMass::fromLog(floor.logValue() - w.logValue());
    AtomSet s = m->atomsIn(J, f);
    for (Atom a : s.atoms) {
      a.weight = w * a.weight;
      out.atoms.push_back(a);
    }
    if (!s.restMass.isZero()) {
      out.restMass = logSumExp(out.restMass, w * s.restMass);
      out.restLo = anyRest ? rmin(out.restLo, s.restLo) : s.restLo;
      out.restHi = anyRest ? rmax(out.restHi, s.restHi) : s.restHi;
      anyRest = true;
    }
  }
  std::stable_sort(out.atoms.begin(), out.atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.position < b.position; });
  return out;
}

std::optional<LogMass> Mixture::cdfIntegral(Real L, Real y0, Real y1) const {
  LogMass total;
  for (const auto& [w, m] : components_) {
    const auto v = m->cdfIntegral(L, y0, y1);
    if (!v) return std::nullopt;
    total = logSumExp(total, w * *v);
  }
  return total;
}

}  // namespace scenerylab
