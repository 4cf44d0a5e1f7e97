#include <catch2/catch_amalgamated.hpp>

#include "rbindex/rational.hpp"

using namespace rbindex;

TEST_CASE("parse accepts integers, fractions and decimals") {
  CHECK(parse_rational("5/4") == rat(5, 4));
  CHECK(parse_rational("-7/2") == rat(-7, 2));
  CHECK(parse_rational("1.25") == rat(5, 4));
  CHECK(parse_rational("-.5") == rat(-1, 2));
  CHECK(parse_rational("42") == rat(42));
  CHECK(parse_rational("-0.750") == rat(-3, 4));
}

TEST_CASE("parse rejects malformed literals") {
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.2/3"), ParseError);
}

TEST_CASE("canonical formatting round-trips") {
  CHECK(format_rational(rat(5, 4)) == "5/4");
  CHECK(format_rational(rat(8, 4)) == "2");
  CHECK(format_rational(rat(-6, 4)) == "-3/2");
  CHECK(format_rational(rat(0)) == "0");
  for (const char* lit : {"5/4", "-3/2", "17", "0", "-123/456789"}) {
    Rational v = parse_rational(lit);
    CHECK(parse_rational(format_rational(v)) == v);
  }
}

TEST_CASE("canonical form is unique per value") {
  CHECK(parse_rational("2/4") == parse_rational("1/2"));
  CHECK(format_rational(parse_rational("2/4")) == format_rational(parse_rational("3/6")));
  CHECK(parse_rational("-1/2") == parse_rational("1/-2"));
}
