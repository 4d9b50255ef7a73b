#include "doctest.h"

#include "property_suites.hpp"

using namespace scenerylab;

namespace {

void expectClean(const props::SuiteResult& r, long minCases) {
  INFO(r.name << ": " << r.failures << " failures of " << r.cases << "; first: " << r.firstFailure);
  CHECK(r.failures == 0);
  CHECK(r.cases >= minCases);
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("normalization") { expectClean(props::normalization(), 1000); }
  TEST_CASE("monotonicity") { expectClean(props::monotonicity(), 1000); }
  TEST_CASE("additivity") { expectClean(props::additivity(), 1000); }
  TEST_CASE("window average") { expectClean(props::windowAverage(), 1000); }
  TEST_CASE("pushforward oracle") { expectClean(props::pushforwardOracle(), 1000); }
  TEST_CASE("affine equivariance") { expectClean(props::affineEquivariance(), 1000); }
  TEST_CASE("diffeo round trips") { expectClean(props::diffeoRoundTrips(), 1000); }
  TEST_CASE("W1 axioms") { expectClean(props::w1Axioms(), 1000); }
  TEST_CASE("parallel determinism") { expectClean(props::parallelDeterminism(), 1000); }
  TEST_CASE("cylinder consistency") { expectClean(props::cylinderConsistency(), 300); }
  TEST_CASE("cylinder nesting") { expectClean(props::cylinderNesting(), 1000); }
  TEST_CASE("return-time cocycle") { expectClean(props::returnTimeCocycle(), 1000); }
  TEST_CASE("scenery renewal") { expectClean(props::sceneryRenewal(), 20); }
}
