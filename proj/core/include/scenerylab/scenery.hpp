#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "scenerylab/diffeo.hpp"
#include "scenerylab/measure.hpp"

namespace scenerylab {

// Continuous piecewise-linear function on I = [-1, 1].
class TestFunction {
 public:
  // Breakpoints (u, value) with u strictly increasing from -1 to 1.
  TestFunction(std::string id, std::vector<std::pair<Real, Real>> breakpoints);

  static TestFunction constant1();
  static TestFunction identity();
  // 1 on [-1, c], 0 on [c + eps, 1], linear in between.
  static TestFunction trapezoid(Real c, Real eps);

  const std::string& id() const { return id_; }
  const std::vector<std::pair<Real, Real>>& breakpoints() const { return pts_; }
  Real operator()(Real u) const;
  Real lipschitz() const;

 private:
  std::string id_;
  std::vector<std::pair<Real, Real>> pts_;
};

// Trapezoids at c = -3/4, -1/2, ..., 3/4 with eps = 1/32, then const1 and ident.
std::vector<TestFunction> standardFamily();
// Trapezoid between the indicators of [-1, -1/2] and [-1, 0].
TestFunction leftHalfTrapezoid();
// "const1", "ident" or "trap:c,eps". Throws ConfigError.
TestFunction parseTestFunction(const std::string& id);

// mu_{x,t}: the restriction of mu to x + e^{-t} I, rescaled to I and
// normalized.
class SceneryMeasure {
 public:
  SceneryMeasure(MeasurePtr base, Real x, Real t);

  const MeasurePtr& base() const { return base_; }
  Real center() const { return x_; }
  Real zoom() const { return t_; }
  Real radius() const { return r_; }
  const LogMass& normalizer() const { return z_; }

  // x + e^{-t} A
  Interval window(const Interval& A) const { return A.affine(x_, r_); }
  // log of mass(A) for A inside I.
  Real logMassOf(const Interval& A) const;
  double mass(const Interval& A) const;
  // mass([-1, u])
  double cdf(Real u) const;
  // int phi d(mu_{x,t}) to within tol.
  double integrate(const TestFunction& phi, double tol = 1e-9) const;

 private:
  double integrateExact(const TestFunction& phi) const;
  double integrateAtoms(const TestFunction& phi) const;
  double integrateQuadrature(const TestFunction& phi, double tol) const;

  MeasurePtr base_;
  Real x_, t_, r_;
  LogMass z_;
  bool atomic_ = false;
  AtomSet atoms_;  // window coordinates
  std::vector<Real> shares_;  // atom probabilities, then the rest mass
};

SceneryMeasure scenery(const MeasurePtr& m, Real x, Real t);

// Distribution function u -> nu([-1, u]) of a probability measure on I.
using WindowCdf = std::function<double(Real)>;
WindowCdf cdfOf(const SceneryMeasure& nu);
// Explicit atoms (position in I, probability).
WindowCdf cdfOf(const std::vector<std::pair<Real, double>>& atoms);

// int_{-1}^{1} |F1 - F2| du as a left Riemann sum over `grid` cells.
double w1Distance(const WindowCdf& a, const WindowCdf& b, int grid = 4096);

struct PathRow {
  Real t;
  double valueMu;
  double valueFmu;
  double gap;
};

// Compares mu_{x,t}(phi) with (f mu)_{f(x), t - s}(phi), s = log f'(x).
std::vector<PathRow> sceneryDifferencePath(const MeasurePtr& m, const Diffeo& f, Real x,
                                           const std::vector<Real>& tGrid, const TestFunction& phi,
                                           double tol = 1e-9);

}  // namespace scenerylab
