#include <gtest/gtest.h>

#include "ahcert/numeric.hpp"

using namespace ahcert;

TEST(Numeric, FormatIsLowestTerms) {
  EXPECT_EQ(format_rational(make_rational(4, 6)), "2/3");
  EXPECT_EQ(format_rational(make_rational(-4, 2)), "-2/1");
  EXPECT_EQ(format_rational(Rational(0)), "0/1");
  EXPECT_EQ(format_integer(Integer(-17)), "-17");
}

TEST(Numeric, ParseAcceptsExactForms) {
  EXPECT_EQ(parse_rational("7/3"), make_rational(7, 3));
  EXPECT_EQ(parse_rational("-6/4"), make_rational(-3, 2));
  EXPECT_EQ(parse_rational("5"), Rational(5));
  EXPECT_EQ(parse_integer("-12"), Integer(-12));
}

TEST(Numeric, ParseRejectsInexactOrMalformed) {
  for (const char* bad : {"0.5", "1e3", "1/0", "", "/3", "3/", "a/b", "1/2/3", " 1/2"}) {
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
  }
  EXPECT_THROW(parse_integer("2/1"), std::invalid_argument);
}

TEST(Numeric, RoundTripThroughFormat) {
  for (long p = -20; p <= 20; ++p) {
    for (long q = 1; q <= 7; ++q) {
      const Rational x = make_rational(p, q);
      EXPECT_EQ(parse_rational(format_rational(x)), x);
    }
  }
}

TEST(Numeric, FloorCeilOnNegatives) {
  EXPECT_EQ(floor_div(-7, 2), -4);
  EXPECT_EQ(ceil_div(-7, 2), -3);
  EXPECT_EQ(floor_div(7, 2), 3);
  EXPECT_EQ(ceil_div(7, 2), 4);
  EXPECT_EQ(floor(make_rational(-1, 3)), -1);
  EXPECT_EQ(ceil(make_rational(-1, 3)), 0);
  EXPECT_EQ(floor(Rational(5)), 5);
}

TEST(Numeric, GeneralizedBinomial) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(2, 5), 0);
  EXPECT_EQ(binomial(-1, 3), -1);  // (-1)^k
  EXPECT_EQ(binomial(-2, 3), -4);  // (-1)^k (k + 1)
  EXPECT_EQ(binomial(7, 0), 1);
  EXPECT_EQ(factorial(6), 720);
  EXPECT_EQ(inverse_power_of_two(3), make_rational(1, 8));
}
