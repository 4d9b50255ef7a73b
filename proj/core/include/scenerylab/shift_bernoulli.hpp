#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "scenerylab/measure.hpp"
#include "scenerylab/scenery.hpp"

namespace scenerylab {

// Symbol probabilities. The signed families assign p_{|l|} to each symbol
// l != 0, with sum_{l >= 1} p_l = 1/2. A finite list assigns p_0 .. p_{m-1}
// to m equal branches of I.
class WeightFamily {
 public:
  enum class Kind { DyadicLebesgue, PN, Finite };

  // p_l = 2^{-(l+1)}
  static WeightFamily dyadicLebesgue();
  // p_l = c_N 2^{-l} for l <= N and c_N / l! for l > N.
  static WeightFamily pN(int N);
  static WeightFamily finite(std::vector<Real> probabilities);

  Kind kind() const { return kind_; }
  bool isSigned() const { return kind_ != Kind::Finite; }
  int N() const { return n_; }
  const std::vector<Real>& list() const { return list_; }
  std::string name() const;

  // Signed families: l >= 1. Finite: 0 <= l < m.
  Real p(long l) const;
  // sum_{l > n} p_l over positive symbols.
  Real tailSum(long n) const;
  // Number of branches for finite lists, -1 for the signed families.
  long size() const { return kind_ == Kind::Finite ? static_cast<long>(list_.size()) : -1; }
  Real normalizer() const { return c_; }

 private:
  Kind kind_ = Kind::DyadicLebesgue;
  int n_ = 0;
  Real c_ = 1;
  std::vector<Real> list_;
};

// Piecewise linear shift map. SignedDyadic has [l] = sign(l) [2^{-|l|}, 2^{1-|l|}];
// FiniteUniform splits I into m equal branches numbered from the left.
class ShiftSystem {
 public:
  enum class Kind { SignedDyadic, FiniteUniform };

  static ShiftSystem signedDyadic() { return ShiftSystem(Kind::SignedDyadic, 0); }
  static ShiftSystem finiteUniform(long m);
  static ShiftSystem forWeights(const WeightFamily& w);

  Kind kind() const { return kind_; }
  long branches() const { return m_; }
  bool isSymbol(long l) const;
  Interval basic(long l) const;
  Real expansion(long l) const;
  Real sigma(long l, Real y) const;
  Real sigmaInverse(long l, Real y) const;
  // Symbol of the basic interval holding y in its interior; nullopt on
  // boundaries and outside (-1, 1).
  std::optional<long> digitOf(Real y) const;

 private:
  ShiftSystem(Kind k, long m) : kind_(k), m_(m) {}
  Kind kind_;
  long m_;
};

Interval cylinder(const ShiftSystem& sys, const std::vector<long>& digits);

template <class T>
class BernoulliKernel;

// Bernoulli measure of a shift system. Interval masses and distribution
// integrals are computed by descending the cylinder structure, so they are
// relative-accurate however small the interval.
class BernoulliMeasure final : public MeasureModel {
 public:
  explicit BernoulliMeasure(WeightFamily w);
  ~BernoulliMeasure() override;

  std::string type() const override { return "bernoulli"; }
  LogMass logMass(const Interval& J) const override;
  std::optional<LogMass> cdfIntegral(Real L, Real y0, Real y1) const override;
  // logMass together with a relative bound on the neglected mass.
  LogMass logMass(const Interval& J, Real& err) const;

  const WeightFamily& weights() const { return w_; }
  const ShiftSystem& system() const { return sys_; }
  Real mean() const;
  const BernoulliKernel<double>& fastKernel() const { return *fast_; }

 private:
  WeightFamily w_;
  ShiftSystem sys_;
  std::shared_ptr<const BernoulliKernel<Real>> exact_;
  std::shared_ptr<const BernoulliKernel<double>> fast_;
};

// logMass with an explicit relative tolerance; throws ToleranceError when the
// refinement cannot certify it.
LogMass bernoulliLogMass(const BernoulliMeasure& m, const Interval& J, Real tol);

// T_k(x) = inf{t >= 0 : x + I_t inside [x_1 ... x_k]}; +inf when a digit is
// undefined.
Real returnTime(const ShiftSystem& sys, Real x, int k);

// Counter-based generator: stream i of seed s is independent of every other
// stream, so samples do not depend on how work is split.
class SplitMix64 {
 public:
  SplitMix64(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  double uniform();  // [0, 1)

 private:
  std::uint64_t state_;
};

std::vector<long> sampleDigits(const WeightFamily& w, SplitMix64& rng, int count);
// Midpoint of the cylinder [d_1 ... d_n].
Real digitsToPoint(const ShiftSystem& sys, const std::vector<long>& digits);

struct MonteCarloConfig {
  long samples = 100000;
  int depth = 60;
  double tStep = 0.005;
  std::uint64_t seed = 1;
};

struct MomentEstimate {
  std::string phiId;
  double moment;
  double stderr_;
  long nSamples;
};

struct MomentReport {
  std::vector<MomentEstimate> moments;
  double meanReturnGap = 0;  // sample mean of T_1 - T_0
  double meanT0 = 0;
  double stderrT0 = 0;
  bool integrabilityWarning = false;
};

// Monte Carlo estimate of int g dP for g(nu) = nu(phi), with P the
// distribution generated by the Bernoulli measure.
MomentReport generatedDistributionMoments(const BernoulliMeasure& m, const std::vector<TestFunction>& family,
                                          const MonteCarloConfig& cfg);

// mu_{0,t}(+-[1 - 1/(1 + 4^m), 1]) at t = -log((1 + 4^{-m}) 2^{-n}).
double endpointMass(const WeightFamily& w, int m, int n);

// Local dimension -sum p log p / (log 2 sum (l + 1) p) for the signed
// families; entropy / log m for finite lists.
double dimensionFormula(const WeightFamily& w);

}  // namespace scenerylab
