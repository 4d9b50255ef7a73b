#pragma once

#include <string>
#include <vector>

#include "scenerylab/measure.hpp"
#include "scenerylab/scenery.hpp"

namespace scenerylab {

// Grid t_k = k * step, k = 0 .. floor(T / step).
std::vector<Real> timeGrid(Real T, Real step);

// Empirical <mu>_{x,T}: sceneries sampled on the time grid. With a shift s
// the k-th sample is mu_{x, t_k - s}; samples with t_k < s are invalid.
class ScalingDistribution {
 public:
  ScalingDistribution(MeasurePtr m, Real x, Real T, Real step, Real shift = 0);

  const MeasurePtr& source() const { return m_; }
  Real center() const { return x_; }
  Real horizon() const { return T_; }
  Real step() const { return step_; }
  Real shift() const { return shift_; }
  const std::vector<Real>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  bool valid(std::size_t k) const { return times_[k] >= shift_; }
  SceneryMeasure sample(std::size_t k) const;

  // nu_k(phi) per grid point, NaN where the sample is invalid.
  std::vector<double> functionalValues(const TestFunction& phi, double tol = 1e-9) const;
  // Same for a family, building each sample once; indexed [phi][k].
  std::vector<std::vector<double>> functionalValues(const std::vector<TestFunction>& family,
                                                    double tol = 1e-9) const;
  // Mean of nu_k(phi) over valid samples.
  double moment(const TestFunction& phi, double tol = 1e-9) const;

 private:
  MeasurePtr m_;
  Real x_, T_, step_, shift_;
  std::vector<Real> times_;
};

// The pair <mu>_{x,T} and <f mu>_{f(x),T} with the time shift s = log f'(x).
ScalingDistribution pushforwardScaling(const MeasurePtr& m, const Diffeo& f, Real x, Real T, Real step);

struct GapRow {
  std::string phiId;
  double meanMu;
  double meanFmu;
  double gap;
};

// max over the family of |mean nu(phi) - mean nu'(phi)|, averaging over the
// grid points valid in both. Throws GridMismatch on different grids.
double distributionGap(const ScalingDistribution& d1, const ScalingDistribution& d2,
                       const std::vector<TestFunction>& family, std::vector<GapRow>* rows = nullptr,
                       double tol = 1e-9);

// Grid fraction of t with mu(x + gamma I_t) / mu(x + I_t) >= K.
double tcDensity(const MeasurePtr& m, Real x, Real gamma, Real K, Real T, Real step);
double bGammaDensity(const MeasurePtr& m, Real x, Real gamma, Real T, Real step);

struct TcRow {
  double gamma, K, T, density;
};
// Densities on a (gamma, K, T) grid; the window ratios are computed once per
// (gamma, t).
std::vector<TcRow> tcReport(const MeasurePtr& m, Real x, const std::vector<Real>& gammas,
                            const std::vector<Real>& Ks, const std::vector<Real>& Ts, Real step);

struct DimensionRow {
  Real r;
  LogMass mass;
  Real ratio;  // log mu([x - r, x + r]) / log r
};
std::vector<DimensionRow> dimensionProfile(const MeasurePtr& m, Real x, Real rMin, Real rMax, int points);
// max of the profile ratios.
Real upperLocalDimension(const MeasurePtr& m, Real x, Real rMin, Real rMax, int points);

}  // namespace scenerylab
