#include "doctest.h"

#include <cmath>
#include <random>

#include "scenerylab/diffeo.hpp"
#include "scenerylab/errors.hpp"

using namespace scenerylab;

TEST_SUITE("diffeo") {
  TEST_CASE("ex1 inverse") {
    const Diffeo f = ex1Diffeo();
    CHECK(toDouble(rabs(f.inverse(Real(1) / 10) - Real(99) / 1000)) <= 1e-30);
    CHECK(toDouble(rabs(f.forward(Real(99) / 1000) - Real(1) / 10)) <= 1e-30);
    CHECK(toDouble(f.derivative(0)) == 1.0);
  }

  TEST_CASE("identity") {
    const Diffeo f = identityDiffeo();
    for (double x : {-0.7, 0.0, 0.3}) {
      CHECK(f.forward(x) == Real(x));
      CHECK(f.inverse(x) == Real(x));
      CHECK(f.derivative(x) == 1);
    }
  }

  TEST_CASE("ex5 quadratic residual") {
    // g solves g + g^2 = x - x^2; the quadratic formula gives the oracle.
    const Real x = Real(1) / 100;
    const Real g = ex5GClosedForm(x);
    CHECK(toDouble(rabs(g + g * g - (x - x * x))) <= 1e-14);
    const long double xd = 0.01L;
    const long double oracle = (-1 + std::sqrt(1 + 4 * (xd - xd * xd))) / 2;
    CHECK(toDouble(g) == doctest::Approx(double(oracle)).epsilon(1e-15));
    const Diffeo f = ex5Diffeo();
    CHECK(toDouble(rabs(f.inverse(x) - g)) <= 1e-30);
    CHECK(toDouble(rabs(f.forward(g) - x)) <= 1e-30);
    CHECK(toDouble(rabs(f.inverseOffset(x) - (g - x))) <= 1e-30);
  }

  TEST_CASE("ex3 inverse closed form") {
    const Diffeo f = ex3Diffeo();
    for (double x : {0.01, 0.2, 0.5}) {
      CHECK(toDouble(rabs(f.inverse(x) - (Real(x) + Real(x) * Real(x)))) <= 1e-30);
      CHECK(toDouble(rabs(f.inverse(-x) + Real(x))) <= 1e-30);
    }
  }

  TEST_CASE("separating diffeo knots") {
    std::vector<Real> T;
    for (int n = 1; n <= 60; ++n) T.push_back(n);
    const Diffeo f = separatingDiffeo(T, 1);
    // f'(e^{-T_1}) = (2 + 1) / (2 - 1).
    CHECK(toDouble(f.derivative(rexp(Real(-1)))) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(toDouble(f.derivative(rexp(Real(-60)))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(toDouble(f.derivative(Real(1e-40))) == doctest::Approx(1.0).epsilon(1e-12));
    const Real x = rexp(Real(-5));
    CHECK(f.forward(x * (1 - rldexp(1, -5))) >= x);
    CHECK(f.forward(Real(-1) / 3) == Real(-1) / 3);
    CHECK_THROWS_AS(separatingDiffeo({Real(1), Real(3), Real(2)}, 1), MonotonicityError);
  }

  TEST_CASE("invertMonotone") {
    auto cubic = [](Real x) { return x * x * x + x; };
    CHECK(toDouble(rabs(invertMonotone(cubic, 2, Interval::closed(0, 2)) - 1)) <= 1e-25);
    auto ex1inv = [](Real x) { return ex1InverseClosedForm(x); };
    CHECK(toDouble(rabs(invertMonotone(ex1inv, Real(99) / 1000, Interval::closed(0, Real(4) / 10)) - Real(1) / 10)) <=
          1e-25);
    auto e = [](Real x) { return rexp(x); };
    CHECK(toDouble(rabs(invertMonotone(e, rexp(Real(1) / 2), Interval::closed(0, 1)) - Real(1) / 2)) <= 1e-25);
    CHECK_THROWS_AS(invertMonotone(e, 10, Interval::closed(0, 1)), BracketError);
  }

  TEST_CASE("catalog names") {
    CHECK(makeCatalogDiffeo("affine:2,0.5").forward(1) == Real(5) / 2);
    CHECK_THROWS(makeCatalogDiffeo("nonsense"));
  }
}
