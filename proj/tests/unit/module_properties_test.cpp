#include "doctest.h"

#include <cmath>
#include <random>

#include "scenerylab/diffeo.hpp"
#include "scenerylab/scaling.hpp"
#include "scenerylab/scenery.hpp"
#include "scenerylab/spec_json.hpp"

using namespace scenerylab;

namespace {

struct Source {
  const char* name;
  double xLo, xHi;
};

// Centers inside the support of each model.
const Source kSources[] = {{"lebesgue", -0.5, 0.5}, {"exp_cdf", -0.5, 0.5},     {"ex4", 0.05, 0.5},
                           {"ex5", -0.3, 0.3},      {"bernoulli", -0.9, 0.9}, {"ex1", 0, 0}};

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("integrate lies between the indicator masses") {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 300; ++i) {
      const Source& s = kSources[i % 6];
      const auto m = resolveMeasure(s.name);
      const Real x = s.xLo + (s.xHi - s.xLo) * u(g);
      const Real t = 25 * u(g);
      const Real eps = Real(1) / 64 + u(g) / 4;
      const Real c = -1 + (2 - eps) * u(g);
      const SceneryMeasure nu(m, x, t);
      const double v = nu.integrate(TestFunction::trapezoid(c, eps));
      INFO(s.name << " x=" << toDouble(x) << " t=" << toDouble(t));
      CHECK(v >= nu.mass(Interval::closed(-1, c)) - 1e-9);
      CHECK(v <= nu.mass(Interval::closed(-1, c + eps)) + 1e-9);
    }
  }

  TEST_CASE("sceneries are continuous from inside the cone") {
    for (const char* name : {"lebesgue", "exp_cdf", "ex5"}) {
      const auto m = resolveMeasure(name);
      const Real x0 = Real(1) / 10, t0 = 3;
      const auto limit = cdfOf(SceneryMeasure(m, x0, t0));
      double previous = 1e9;
      for (int k = 2; k <= 14; ++k) {
        const Real t = t0 - rldexp(1, -k);
        const Real x = x0 + (rexp(-t) - rexp(-t0)) / 2;
        const double d = w1Distance(cdfOf(SceneryMeasure(m, x, t)), limit);
        CHECK(d <= previous + 1e-12);
        previous = d;
      }
      CHECK(previous < 1e-3);
    }
  }

  TEST_CASE("distribution gap is a pseudometric") {
    const Real T = 4, step = Real(1) / 10;
    std::vector<ScalingDistribution> d;
    for (const Source& s : kSources) d.emplace_back(resolveMeasure(s.name), Real(s.xLo), T, step);
    const auto family = standardFamily();
    const std::size_t n = d.size();
    std::vector<double> gap(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) gap[a * n + b] = distributionGap(d[a], d[b], family);
    }
    for (std::size_t a = 0; a < n; ++a) {
      CHECK(gap[a * n + a] == 0.0);
      for (std::size_t b = 0; b < n; ++b) {
        CHECK(gap[a * n + b] == gap[b * n + a]);
        for (std::size_t c = 0; c < n; ++c) CHECK(gap[a * n + c] <= gap[a * n + b] + gap[b * n + c] + 1e-12);
      }
    }
  }

  TEST_CASE("affine maps do not change scaling distributions") {
    std::mt19937_64 g(12);
    std::uniform_real_distribution<double> u(0, 1);
    for (const Source& s : kSources) {
      const auto m = resolveMeasure(s.name);
      const Real x = s.xLo + (s.xHi - s.xLo) * u(g);
      const Diffeo f = affineDiffeo(Real(0.5 + 1.5 * u(g)), Real(u(g) - 0.5));
      const ScalingDistribution a(m, x, 10, Real(1) / 20);
      const ScalingDistribution b = pushforwardScaling(m, f, x, 10, Real(1) / 20);
      INFO(s.name);
      CHECK(distributionGap(a, b, standardFamily()) <= 1e-10);
      CHECK(a.moment(TestFunction::constant1()) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(a.size() == 201);
    }
  }

  TEST_CASE("tc density is monotone in K and gamma") {
    std::mt19937_64 g(13);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 30; ++i) {
      const Source& s = kSources[i % 6];
      const auto m = resolveMeasure(s.name);
      const Real x = s.xLo + (s.xHi - s.xLo) * u(g);
      const Real g1 = 1 + u(g), g2 = g1 + u(g);
      const Real k1 = 1 + 5 * u(g), k2 = k1 + 5 * u(g);
      const auto rows = tcReport(m, x, {g1, g2}, {k1, k2}, {Real(20)}, Real(1) / 20);
      // Rows run over gamma, then K.
      REQUIRE(rows.size() == 4);
      for (const auto& r : rows) CHECK((r.density >= 0 && r.density <= 1));
      CHECK(rows[1].density <= rows[0].density);
      CHECK(rows[3].density <= rows[2].density);
      CHECK(rows[2].density >= rows[0].density);
      CHECK(rows[3].density >= rows[1].density);
    }
  }

  TEST_CASE("B_gamma density bound with the estimated dimension") {
    const auto geo = resolveMeasure(R"({"type": "geometric_atoms", "base": 0.5, "weight_ratio": 4})");
    const std::pair<MeasurePtr, Real> cases[] = {
        {resolveMeasure("lebesgue"), 0},
        {resolveMeasure("ex1"), 0},
        {geo, 0},
        {std::make_shared<Pushforward>(geo, affineDiffeo(Real(3) / 2, 0)), 0}};
    for (const auto& [m, x] : cases) {
      const double dim = toDouble(upperLocalDimension(m, x, rexp(Real(-300)), rexp(Real(-20)), 64));
      for (double gamma : {1.05, 1.1, 1.2}) {
        CHECK(bGammaDensity(m, x, gamma, 300, Real(1) / 100) <= std::log(gamma) / std::log(2.0) * dim + 0.05);
      }
    }
  }
}
