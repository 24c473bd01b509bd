#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "fairmab/fairness.hpp"

using namespace fairmab;

TEST_CASE("decimal and rational text parse to the same reduced share") {
  const auto a = parse_share("0.4");
  const auto b = parse_share("2/5");
  CHECK(a.num == 2);
  CHECK(a.den == 5);
  CHECK(b.num == 2);
  CHECK(b.den == 5);
  CHECK(parse_share(".25").num == 1);
  CHECK(parse_share(".25").den == 4);
}

TEST_CASE("share parsing rejects junk") {
  CHECK_THROWS_AS(parse_share(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_share("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_share("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_share("0.4x"), std::invalid_argument);
}

TEST_CASE("exact floors avoid the binary-decimal trap") {
  // 0.29 * 100 rounds below 29 in doubles; the exact floor must be 29.
  CHECK(std::floor(0.29 * 100) == 28.0);  // the trap this module exists for
  CHECK(FairnessConfig::parse({"0.29"}).floor_at(0, 100) == 29);
  const auto beta = FairnessConfig::parse({"0.3", "0.3"});
  CHECK(beta.floor_at(0, 10) == 3);
  CHECK(beta.floor_at(0, 7) == 2);   // 2.1
  CHECK(beta.floor_at(0, 1000000) == 300000);
  const auto two_fifths = FairnessConfig::parse({"2/5"});
  CHECK(two_fifths.floor_at(0, 10) == 4);
  CHECK(two_fifths.floor_at(0, 12) == 4);  // 4.8
}

TEST_CASE("constraint checks run in exact arithmetic") {
  CHECK(FairnessConfig::parse({"0.4", "0.4"}).violations(2).empty());
  CHECK(FairnessConfig::parse({"1/3", "1/3", "1/4"}).violations(3).empty());

  // beta_g > 1/m
  const auto over = FairnessConfig::parse({"0.6", "0.3"}).violations(2);
  REQUIRE(over.size() == 1);
  CHECK(over.front().find("1/m") != std::string::npos);

  // sum exactly 1 must be rejected even where floats would waffle
  CHECK_FALSE(FairnessConfig::parse({"1/2", "1/2"}).violations(2).empty());
  CHECK_FALSE(FairnessConfig::parse({"0.5", "0.5"}).violations(2).empty());
  CHECK_FALSE(
      FairnessConfig::parse({"1/3", "1/3", "1/3"}).violations(3).empty());

  // zero and negative shares
  CHECK_FALSE(FairnessConfig::parse({"0", "0.4"}).violations(2).empty());
  CHECK_FALSE(FairnessConfig::parse({"-0.1", "0.4"}).violations(2).empty());

  // arity mismatch
  CHECK_FALSE(FairnessConfig::parse({"0.4"}).violations(2).empty());
}

TEST_CASE("slack sign and comparison are exact at the boundary") {
  const auto beta = FairnessConfig::parse({"2/5", "2/5"});
  // beta*t = 4 exactly: slack 4 - 4 = 0 is not positive
  CHECK_FALSE(beta.slack_positive(0, 10, 4));
  CHECK(beta.slack_positive(0, 10, 3));
  CHECK_FALSE(beta.slack_positive(0, 10, 5));

  // slacks (1, -1): group 0 strictly more starved
  CHECK(beta.compare_slack(0, 3, 1, 5, 10) > 0);
  CHECK(beta.compare_slack(1, 5, 0, 3, 10) < 0);
  CHECK(beta.compare_slack(0, 3, 1, 3, 10) == 0);

  // mixed denominators: 1/3 * 9 - 2 = 1 vs 0.3 * 9 - 1.7.. exact compare
  const auto mixed = FairnessConfig::parse({"1/3", "0.3"});
  CHECK(mixed.compare_slack(0, 2, 1, 2, 9) > 0);   // 1 vs 0.7
  CHECK(mixed.compare_slack(0, 3, 1, 2, 9) < 0);   // 0 vs 0.7
}

TEST_CASE("share_text echoes the reduced rational") {
  const auto beta = FairnessConfig::parse({"0.4", "0.125"});
  CHECK(beta.share_text(0) == "2/5");
  CHECK(beta.share_text(1) == "1/8");
}
