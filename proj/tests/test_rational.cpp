#include "doctest.h"
#include "mintb/rational.hpp"

using namespace mintb;

TEST_CASE("parsing accepts integers and fractions, canonicalizing both") {
  CHECK(Rational::from_string("7").str() == "7");
  CHECK(Rational::from_string("+7").str() == "7");
  CHECK(Rational::from_string("-3").str() == "-3");
  CHECK(Rational::from_string("0").str() == "0");
  CHECK(Rational::from_string("4/6").str() == "2/3");
  CHECK(Rational::from_string("-10/4").str() == "-5/2");
  CHECK(Rational::from_string("0/5").str() == "0");
  CHECK(Rational::from_string("12/3").str() == "4");
  CHECK(Rational::from_string("12/3").is_integer());
  CHECK(Rational::from_string("123456789012345678901234567890/3").str() ==
        "41152263004115226300411522630");
}

TEST_CASE("parsing rejects anything but p and p/q") {
  CHECK_THROWS_AS(Rational::from_string(""), parse_error);
  CHECK_THROWS_AS(Rational::from_string("-"), parse_error);
  CHECK_THROWS_AS(Rational::from_string("1.5"), parse_error);
  CHECK_THROWS_AS(Rational::from_string("1/"), parse_error);
  CHECK_THROWS_AS(Rational::from_string("/2"), parse_error);
  CHECK_THROWS_AS(Rational::from_string("1/2/3"), parse_error);
  CHECK_THROWS_AS(Rational::from_string("x"), parse_error);
  CHECK_THROWS_AS(Rational::from_string(" 1"), parse_error);
  CHECK_THROWS_AS(Rational::from_string("1 "), parse_error);
  CHECK_THROWS_AS(Rational::from_string("1/-2"), parse_error);
  CHECK_THROWS_AS(Rational::from_string("1/0"), parse_error);
}

TEST_CASE("construction and division guard against zero denominators") {
  CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), validation_error);
  Rational x(3);
  CHECK_THROWS_AS(x /= Rational(0), validation_error);
}

TEST_CASE("arithmetic is exact") {
  Rational third(BigInt(1), BigInt(3));
  Rational sixth(BigInt(1), BigInt(6));
  CHECK((third + sixth).str() == "1/2");
  CHECK((third - sixth) == sixth);
  CHECK((Rational(BigInt(2), BigInt(3)) * Rational(BigInt(3), BigInt(4))).str() == "1/2");
  CHECK((Rational(7) / Rational(2)).str() == "7/2");
  CHECK((-Rational(BigInt(5), BigInt(2))).str() == "-5/2");
  CHECK((Rational(1) - Rational(2)).is_negative());
  CHECK(Rational(0).is_zero());
  // No drift over many small additions: 3000 * 1/3 == 1000.
  Rational acc;
  for (int i = 0; i < 3000; ++i) acc += third;
  CHECK(acc == Rational(1000));
}

TEST_CASE("ordering matches the usual rational order") {
  CHECK(Rational(BigInt(1), BigInt(3)) < Rational(BigInt(1), BigInt(2)));
  CHECK(Rational(-1) < Rational(0));
  CHECK(Rational(BigInt(2), BigInt(4)) == Rational(BigInt(1), BigInt(2)));
  CHECK(Rational(5) >= Rational(5));
  CHECK(Rational(7) > Rational(BigInt(13), BigInt(2)));
}

TEST_CASE("extended costs: one absorbing infinity above every finite value") {
  ExtCost inf = ExtCost::infinity();
  ExtCost five(5);
  CHECK(inf.infinite());
  CHECK_FALSE(five.infinite());
  CHECK(five < inf);
  CHECK(inf > five);
  CHECK(inf == ExtCost::infinity());
  CHECK(inf != five);
  CHECK((inf + five).infinite());
  CHECK((five + inf).infinite());
  CHECK((five + ExtCost(2)) == ExtCost(7));
  CHECK(five.value() == Rational(5));
  CHECK_THROWS_AS(inf.value(), internal_error);
  CHECK(inf.str() == "inf");
  CHECK(five.str() == "5");
  CHECK(ExtCost(Rational(BigInt(1), BigInt(2))).str() == "1/2");
  CHECK_FALSE(inf < inf);
  CHECK(inf <= inf);
}
