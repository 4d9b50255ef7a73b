#include "doctest.h"

#include <cmath>

#include "scenerylab/errors.hpp"
#include "scenerylab/scenery.hpp"
#include "scenerylab/spec_json.hpp"

using namespace scenerylab;

TEST_SUITE("scenery") {
  TEST_CASE("uniform window") {
    const auto leb = resolveMeasure("lebesgue");
    for (double x : {-0.5, 0.0, 0.25}) {
      for (double t : {0.0, 3.0, 35.0}) {
        const SceneryMeasure nu(leb, x, t);
        CHECK(nu.mass(Interval::closed(0, Real(1) / 2)) == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(nu.mass(Interval::unit()) == 1.0);
        CHECK(nu.integrate(TestFunction::constant1()) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("example 1 window at t = 6 log 2") {
    const auto mu = resolveMeasure("ex1");
    const SceneryMeasure nu(mu, 0, 6 * kLn2);
    CHECK(nu.mass(Interval::closed(0, Real(3) / 4)) == doctest::Approx(0.5).epsilon(1e-15));
    const double v = nu.integrate(TestFunction::trapezoid(Real(3) / 4, Real(1) / 20));
    CHECK(v >= 0.5 - 1e-12);
    CHECK(v <= nu.mass(Interval::closed(-1, Real(8) / 10)) + 1e-12);
  }

  TEST_CASE("example 3 symmetry") {
    const SceneryMeasure nu(resolveMeasure("ex3"), 0, 30);
    CHECK(nu.mass(Interval::closed(-1, 0)) == 0.5);
  }

  TEST_CASE("example 4 concentrates at 1") {
    const SceneryMeasure nu(resolveMeasure("ex4"), 0, 30);
    CHECK(nu.integrate(TestFunction::trapezoid(Real(9) / 10, Real(1) / 20)) <= 1e-10);
    // log of the oracle G(0.95 r)/G(r) = -(1/0.95 - 1)/r, far below any double.
    CHECK(toDouble(nu.logMassOf(Interval::closed(-1, Real(95) / 100)) / rexp(Real(30))) ==
          doctest::Approx(-(1 / 0.95 - 1)).epsilon(1e-12));
  }

  TEST_CASE("empty window throws") {
    CHECK_THROWS_AS(SceneryMeasure(resolveMeasure("ex4"), Real(-1) / 2, 5), EmptyWindow);
  }

  TEST_CASE("W1 reference values") {
    const auto left = cdfOf(std::vector<std::pair<Real, double>>{{-1, 1.0}});
    const auto right = cdfOf(std::vector<std::pair<Real, double>>{{1, 1.0}});
    const auto mid = cdfOf(std::vector<std::pair<Real, double>>{{0, 1.0}});
    const auto uniform = cdfOf(SceneryMeasure(resolveMeasure("lebesgue"), 0, 1));
    CHECK(w1Distance(left, right) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(w1Distance(uniform, uniform) == 0.0);
    CHECK(w1Distance(uniform, mid) == doctest::Approx(0.5).epsilon(1e-3));
  }

  TEST_CASE("test functions") {
    const TestFunction trap = TestFunction::trapezoid(Real(1) / 2, Real(1) / 4);
    CHECK(trap(0) == 1);
    CHECK(trap(Real(5) / 8) == Real(1) / 2);
    CHECK(trap(1) == 0);
    CHECK(toDouble(trap.lipschitz()) == 4.0);
    CHECK(standardFamily().size() == 9);
    CHECK(parseTestFunction("trap:0.75,0.01").id() == "trap:0.75,0.01");
    CHECK_THROWS_AS(parseTestFunction("trap:x"), ConfigError);
  }

  TEST_CASE("difference path") {
    const auto mu = resolveMeasure("ex1");
    const TestFunction phi = TestFunction::trapezoid(Real(3) / 4, Real(1) / 100);
    const auto id = sceneryDifferencePath(mu, identityDiffeo(), 0, {Real(1), Real(5), Real(20)}, phi);
    for (const auto& row : id) CHECK(row.gap == 0.0);
    const auto rows = sceneryDifferencePath(mu, ex1Diffeo(), 0, {6 * kLn2, Real(13) / 2 * kLn2}, phi);
    CHECK(rows[0].gap >= 0.5);
    CHECK(rows[1].gap <= 0.05);
  }
}
