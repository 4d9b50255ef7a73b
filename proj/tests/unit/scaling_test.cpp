#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "scenerylab/diffeo.hpp"
#include "scenerylab/scaling.hpp"
#include "scenerylab/spec_json.hpp"

using namespace scenerylab;

TEST_SUITE("scaling") {
  TEST_CASE("lebesgue moments do not depend on T") {
    const auto leb = resolveMeasure("lebesgue");
    const TestFunction phi = TestFunction::trapezoid(0, Real(1) / 32);
    const double a = ScalingDistribution(leb, 0, 5, Real(1) / 10).moment(phi);
    const double b = ScalingDistribution(leb, 0, 30, Real(1) / 10).moment(phi);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    // Uniform window: (1 + eps / 2) / 2.
    CHECK(a == doctest::Approx(0.5 + 1.0 / 128).epsilon(1e-9));
  }

  TEST_CASE("example 3 left half moment") {
    const auto mu = resolveMeasure("ex3");
    const TestFunction phi = TestFunction::trapezoid(Real(-1) / 2, Real(1) / 32);
    // Early windows still carry interior mass; late ones split evenly at +-1.
    const double m40 = ScalingDistribution(mu, 0, 40, Real(1) / 20).moment(phi);
    CHECK(m40 == doctest::Approx(0.5).epsilon(0.05));
  }

  TEST_CASE("example 1 log 2 periodicity") {
    const auto mu = resolveMeasure("ex1");
    const TestFunction phi = TestFunction::trapezoid(Real(1) / 4, Real(1) / 32);
    for (double t : {10.0, 13.3, 17.9}) {
      const double a = SceneryMeasure(mu, 0, t).integrate(phi);
      const double b = SceneryMeasure(mu, 0, t + kLn2).integrate(phi);
      CHECK(std::fabs(a - b) <= 1e-6);
    }
  }

  TEST_CASE("distribution gap") {
    const auto mu = resolveMeasure("ex1");
    const auto d = ScalingDistribution(mu, 0, 20, Real(1) / 10);
    CHECK(distributionGap(d, d, standardFamily()) == 0.0);
    const auto e3 = resolveMeasure("ex3");
    const auto a = ScalingDistribution(e3, 0, 40, Real(1) / 100);
    const auto b = pushforwardScaling(e3, ex3Diffeo(), 0, 40, Real(1) / 100);
    CHECK(distributionGap(a, b, {leftHalfTrapezoid()}) >= 0.21);
  }

  TEST_CASE("tc density") {
    CHECK(tcDensity(resolveMeasure("lebesgue"), 0, Real(12) / 10, 2, 30, Real(1) / 100) == 0.0);
    CHECK(tcDensity(resolveMeasure("ex3"), 0, Real(3) / 2, 10, 40, Real(1) / 100) >= 0.95);
    CHECK(tcDensity(resolveMeasure("ex1"), 0, Real(101) / 100, 100, 200, Real(1) / 100) <= 0.05);
  }

  TEST_CASE("b gamma density") {
    CHECK(bGammaDensity(resolveMeasure("lebesgue"), 0, Real(15) / 10, 30, Real(1) / 100) == 0.0);
    const double bound = std::log(1.1) / std::log(2.0);
    const auto g2 = std::make_shared<GeometricAtoms>(Real(1) / 2, 2);
    const auto g4 = std::make_shared<GeometricAtoms>(Real(1) / 2, 4);
    CHECK(bGammaDensity(g2, 0, Real(11) / 10, 300, Real(1) / 100) <= bound + 0.05);
    CHECK(bGammaDensity(g4, 0, Real(11) / 10, 300, Real(1) / 100) <= 2 * bound + 0.05);
  }

  TEST_CASE("local dimension") {
    const Real lo = rldexp(1, -40);
    // mu([x - r, x + r]) = 2r, so the profile ratio is 1 + log 2 / log r, largest at rMin.
    CHECK(toDouble(upperLocalDimension(resolveMeasure("lebesgue"), Real(3) / 10, lo, Real(1) / 1000, 64)) ==
          doctest::Approx(1 - 1.0 / 40).epsilon(1e-12));
    for (int w : {2, 4, 8}) {
      const auto g = std::make_shared<GeometricAtoms>(Real(1) / 2, w);
      const double est = toDouble(upperLocalDimension(g, 0, lo, rldexp(1, -30), 64));
      // Oracle on the same radii: mu([-r, r]) = sum_{2^-k <= r} w^-k = w^-k0 / (1 - 1/w).
      long double best = -1;
      for (const auto& row : dimensionProfile(g, 0, lo, rldexp(1, -30), 64)) {
        int e = 0;
        rfrexp(row.r, &e);  // 2^{e-1} <= r < 2^e
        const long k0 = 1 - e;
        const long double logMass = -k0 * std::log((long double)w) - std::log1p(-1.0L / w);
        best = std::max(best, logMass / std::log((long double)toDouble(row.r)));
      }
      CHECK(est == doctest::Approx(double(best)).epsilon(1e-12));
      if (w == 2) CHECK(est == doctest::Approx(1.0).epsilon(0.01));
    }
    CHECK(toDouble(upperLocalDimension(resolveMeasure("ex3"), 0, rexp(Real(-30)), Real(1) / 2, 64)) > 1e3);
  }
}
