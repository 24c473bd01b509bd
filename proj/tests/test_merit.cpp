#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "fairmab/merit.hpp"
#include "fairmab/rng.hpp"

using namespace fairmab;

TEST_CASE("merit_value evaluates the closed forms") {
  CHECK(merit_value(make_identity_merit(), 0.7) == 0.7);
  CHECK(merit_value(make_affine_merit(2.0, 1.0, 0.0), 0.5) == 2.0);
  CHECK(merit_value(make_power_merit(2.0), 0.5) == 0.25);
}

TEST_CASE("merit_value rejects points outside the evaluation domain") {
  const auto merit = make_identity_merit(1e-3);
  CHECK_THROWS_AS(merit_value(merit, 1e-4), std::domain_error);
  CHECK_THROWS_AS(merit_value(merit, 1.5), std::domain_error);
}

TEST_CASE("merit_bounds gives the analytic extrema") {
  const auto identity_half = make_identity_merit(0.5);
  auto b = merit_bounds(identity_half);
  CHECK(b.gamma1 == 0.5);
  CHECK(b.gamma2 == 1.0);
  CHECK(b.lipschitz == 1.0);

  const auto affine = make_affine_merit(2.0, 1.0, 0.0);
  b = merit_bounds(affine);
  CHECK(b.gamma1 == 1.0);
  CHECK(b.gamma2 == 3.0);
  CHECK(b.lipschitz == 2.0);
}

TEST_CASE("identity merit with a zero floor violates the minimum-merit assumption") {
  CHECK_THROWS_AS(make_identity_merit(0.0), std::invalid_argument);
}

TEST_CASE("decreasing affine merit is rejected") {
  CHECK_THROWS_AS(make_affine_merit(-1.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("power merit requires p >= 1") {
  CHECK_THROWS_AS(make_power_merit(0.5), std::invalid_argument);
}

TEST_CASE("Lipschitz bound holds over random pairs") {
  const MeritSpec merits[] = {make_identity_merit(1e-3),
                              make_affine_merit(2.0, 0.5, 1e-3),
                              make_power_merit(3.0, 1e-3)};
  RngStream rng(31, 0, StreamPurpose::aux);
  for (const auto& merit : merits) {
    for (int i = 0; i < 10000; ++i) {
      const double span = merit.domain_hi - merit.domain_lo;
      const double x = merit.domain_lo + span * rng.next_u01();
      const double y = merit.domain_lo + span * rng.next_u01();
      CHECK(std::abs(merit.value(x) - merit.value(y)) <=
            merit.lipschitz * std::abs(x - y) + 1e-12);
    }
  }
}

TEST_CASE("merit values stay within [gamma1, gamma2] over random points") {
  const MeritSpec merits[] = {make_identity_merit(1e-3),
                              make_affine_merit(1.5, 0.2, 1e-3),
                              make_power_merit(2.0, 1e-3)};
  RngStream rng(32, 0, StreamPurpose::aux);
  for (const auto& merit : merits) {
    for (int i = 0; i < 10000; ++i) {
      const double x =
          merit.domain_lo + (merit.domain_hi - merit.domain_lo) * rng.next_u01();
      const double f = merit.value(x);
      CHECK(f >= merit.gamma1 - 1e-15);
      CHECK(f <= merit.gamma2 + 1e-15);
    }
  }
}
