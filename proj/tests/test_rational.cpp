#include <doctest.h>

#include <stdexcept>

#include "effopen/rational.hpp"

using effopen::Rational;

TEST_CASE("parse fractions, integers and decimals exactly") {
  CHECK(effopen::parse_rational("3/4") == Rational(3, 4));
  CHECK(effopen::parse_rational("-6/8") == Rational(-3, 4));
  CHECK(effopen::parse_rational("7") == Rational(7));
  CHECK(effopen::parse_rational("0.25") == Rational(1, 4));
  CHECK(effopen::parse_rational("-1.5") == Rational(-3, 2));
  CHECK(effopen::parse_rational(" 2/3 ") == Rational(2, 3));
}

TEST_CASE("malformed rationals are rejected") {
  for (const char* bad : {"1/0", "", "abc", "1/", "/2", "1.2.3", "1/2/3", "0x10", "1e5"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(effopen::parse_rational(bad), std::invalid_argument);
  }
}

TEST_CASE("format round trip") {
  for (const Rational& r : {Rational(1, 3), Rational(-22, 7), Rational(5), Rational(0)}) {
    CHECK(effopen::parse_rational(effopen::format_rational(r)) == r);
  }
  CHECK(effopen::format_rational(Rational(4, 2)) == "2");
  CHECK(effopen::format_rational(Rational(-1, 3)) == "-1/3");
}

TEST_CASE("integer helpers") {
  CHECK(effopen::floor_plus_one(Rational(3, 2)) == 2);
  CHECK(effopen::floor_plus_one(Rational(2)) == 3);
  CHECK(effopen::floor_plus_one(Rational(-1, 2)) == 0);
  CHECK(effopen::ceil_of(Rational(3, 2)) == 2);
  CHECK(effopen::ceil_of(Rational(2)) == 2);
  CHECK(effopen::ceil_of(Rational(-3, 2)) == -1);
  CHECK(effopen::to_double(Rational(1, 8)) == 0.125);
}
