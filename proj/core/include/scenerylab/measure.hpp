#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scenerylab/diffeo.hpp"
#include "scenerylab/interval.hpp"
#include "scenerylab/log_mass.hpp"

namespace scenerylab {

struct Atom {
  Real position;
  LogMass weight;
};

// Atoms of an interval, enumerated down to a weight floor. The remaining
// atoms are summarized by their total mass and the hull they lie in.
struct AtomSet {
  std::vector<Atom> atoms;  // ascending positions
  LogMass restMass;
  Real restLo = 0;
  Real restHi = 0;
};

// Immutable measure on the real line answering interval-mass queries in the
// log domain. Implementations are safe for concurrent use.
class MeasureModel {
 public:
  virtual ~MeasureModel() = default;

  // JSON "type" string of the variant.
  virtual std::string type() const = 0;
  virtual LogMass logMass(const Interval& J) const = 0;

  // Purely atomic models can enumerate their atoms.
  virtual bool isAtomic() const { return false; }
  virtual AtomSet atomsIn(const Interval& J, const LogMass& floor) const;

  // int_{y0}^{y1} mu([L, y]) dy for L <= y0 <= y1, when the model has an
  // exact primitive. Used for test-functional integration of sceneries.
  virtual std::optional<LogMass> cdfIntegral(Real L, Real y0, Real y1) const;
};

using MeasurePtr = std::shared_ptr<const MeasureModel>;

LogMass logMass(const MeasureModel& m, const Interval& J);
// mu(num) / mu(den), formed from the exponent difference.
double massRatio(const MeasureModel& m, const Interval& num, const Interval& den);

// Atoms at b^k with weights w^{-k}, k >= 1.
class GeometricAtoms final : public MeasureModel {
 public:
  GeometricAtoms(Real base, Real weightRatio);

  std::string type() const override { return "geometric_atoms"; }
  LogMass logMass(const Interval& J) const override;
  bool isAtomic() const override { return true; }
  AtomSet atomsIn(const Interval& J, const LogMass& floor) const override;

  Real base() const { return b_; }
  Real weightRatio() const { return w_; }
  Real position(long k) const;
  // log sum_{k > n} w^{-k}
  LogMass tailLogMass(long n) const;

 private:
  // Index range [first, last] of atoms in J; last < 0 means unbounded.
  bool indexRange(const Interval& J, long& first, long& last) const;
  LogMass rangeMass(long first, long last) const;

  Real b_, w_;
  Real logB_, logW_;
};

// A finite list of weighted atoms.
class AtomList final : public MeasureModel {
 public:
  explicit AtomList(std::vector<Atom> atoms);

  std::string type() const override { return "atom_list"; }
  LogMass logMass(const Interval& J) const override;
  bool isAtomic() const override { return true; }
  AtomSet atomsIn(const Interval& J, const LogMass& floor) const override;

  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  std::vector<Atom> atoms_;
};

// Continuous measure given by its two one-sided distribution functions
// mu([0, x]) and mu([-x, 0]) for x > 0. No atom at 0.
class CdfPair : public MeasureModel {
 public:
  LogMass logMass(const Interval& J) const override;

  virtual LogMass rightCdf(Real x) const = 0;
  virtual LogMass leftCdf(Real x) const = 0;
  // mu([a, b]) and mu([-b, -a]) for 0 < a < b. The defaults subtract the
  // distribution functions; the catalog overrides them with forms that do
  // not cancel.
  virtual LogMass rightBetween(Real a, Real b) const;
  virtual LogMass leftBetween(Real a, Real b) const;
};

// Lebesgue measure: mu([0, x]) = x on both sides.
class LebesgueCdf final : public CdfPair {
 public:
  std::string type() const override { return "lebesgue"; }
  LogMass rightCdf(Real x) const override;
  LogMass leftCdf(Real x) const override { return rightCdf(x); }
  LogMass rightBetween(Real a, Real b) const override;
  LogMass leftBetween(Real a, Real b) const override { return rightBetween(a, b); }
  std::optional<LogMass> cdfIntegral(Real L, Real y0, Real y1) const override;
};

// G(x) = exp(-1/x) on both sides.
class ExpCdf final : public CdfPair {
 public:
  std::string type() const override { return "exp_cdf"; }
  LogMass rightCdf(Real x) const override;
  LogMass leftCdf(Real x) const override { return rightCdf(x); }
  LogMass rightBetween(Real a, Real b) const override;
  LogMass leftBetween(Real a, Real b) const override { return rightBetween(a, b); }
};

// G(x) = exp(-1/x) on the right, nothing on the left.
class OneSidedExpCdf final : public CdfPair {
 public:
  std::string type() const override { return "one_sided_exp_cdf"; }
  LogMass rightCdf(Real x) const override;
  LogMass leftCdf(Real) const override { return LogMass::zero(); }
  LogMass rightBetween(Real a, Real b) const override;
  LogMass leftBetween(Real, Real) const override { return LogMass::zero(); }
};

// Left side G(x) = exp(-exp(1/(x - x^2))), right side
// H(x) = exp(-exp(1/(x + x^2))), supported on [-1/2, 1/2].
class DoubleExpPair final : public CdfPair {
 public:
  std::string type() const override { return "double_exp_pair"; }
  LogMass rightCdf(Real x) const override;
  LogMass leftCdf(Real x) const override;
  LogMass rightBetween(Real a, Real b) const override;
  LogMass leftBetween(Real a, Real b) const override;

  // Inner exponents 1/(x + x^2) and 1/(x - x^2).
  static Real hExponent(Real x) { return 1 / (x + x * x); }
  static Real gExponent(Real x) { return 1 / (x - x * x); }
};

// f mu, with (f mu)(A) = mu(f^{-1}(A)).
class Pushforward final : public MeasureModel {
 public:
  Pushforward(MeasurePtr base, Diffeo f) : base_(std::move(base)), f_(std::move(f)) {}

  std::string type() const override { return "pushforward"; }
  LogMass logMass(const Interval& J) const override;
  bool isAtomic() const override { return base_->isAtomic(); }
  AtomSet atomsIn(const Interval& J, const LogMass& floor) const override;
  std::optional<LogMass> cdfIntegral(Real L, Real y0, Real y1) const override;

  const MeasurePtr& base() const { return base_; }
  const Diffeo& map() const { return f_; }
  Interval preimage(const Interval& J) const;

 private:
  MeasurePtr base_;
  Diffeo f_;
};

// sum_k w_k mu_k
class Mixture final : public MeasureModel {
 public:
  explicit Mixture(std::vector<std::pair<LogMass, MeasurePtr>> components);

  std::string type() const override { return "mixture"; }
  LogMass logMass(const Interval& J) const override;
  bool isAtomic() const override;
  AtomSet atomsIn(const Interval& J, const LogMass& floor) const override;
  std::optional<LogMass> cdfIntegral(Real L, Real y0, Real y1) const override;

  const std::vector<std::pair<LogMass, MeasurePtr>>& components() const { return components_; }

 private:
  std::vector<std::pair<LogMass, MeasurePtr>> components_;
};

}  // namespace scenerylab
