#include <gtest/gtest.h>

#include "setpack/rational.hpp"

using setpack::Weight;
using setpack::format_weight;
using setpack::parse_weight;

TEST(Rational, ParsesFractions) {
  EXPECT_EQ(parse_weight("3/4"), Weight(3, 4));
  EXPECT_EQ(parse_weight("6/8"), Weight(3, 4));
  EXPECT_EQ(parse_weight(" 7 "), Weight(7));
  EXPECT_EQ(parse_weight("-2/3"), Weight(-2, 3));
}

TEST(Rational, ParsesDecimalsExactly) {
  EXPECT_EQ(parse_weight("0.01422"), Weight(1422, 100000));
  EXPECT_EQ(parse_weight("0.084"), Weight(84, 1000));
  EXPECT_EQ(parse_weight("2.4998"), Weight(24998, 10000));
  EXPECT_EQ(parse_weight(".5"), Weight(1, 2));
  EXPECT_EQ(parse_weight("3."), Weight(3));
}

TEST(Rational, LeadingZerosAreDecimal) {
  EXPECT_EQ(parse_weight("010"), Weight(10));
  EXPECT_EQ(parse_weight("09/018"), Weight(1, 2));
}

TEST(Rational, RejectsGarbage) {
  for (const char* bad : {"", "abc", "1/0", "1/-2", "1.2.3", "0x10", "1e5", "/3"}) {
    EXPECT_THROW(parse_weight(bad), std::invalid_argument) << bad;
  }
}

TEST(Rational, FormatRoundTrips) {
  for (const char* text : {"1/1", "3/7", "123456789012345678901234567891/2"}) {
    EXPECT_EQ(format_weight(parse_weight(text)), text);
  }
  EXPECT_EQ(format_weight(Weight(4)), "4/1");
}

TEST(Rational, DecimalRendering) {
  EXPECT_EQ(setpack::to_decimal(Weight(1, 3)), "0.333333333333");
  EXPECT_EQ(setpack::to_decimal(Weight(5, 2)), "2.5");
  EXPECT_EQ(setpack::to_decimal(Weight(2, 3), 4), "0.6667");
}

TEST(Rational, FloorAndCeil) {
  EXPECT_EQ(setpack::floor_of(Weight(7, 2)), 3);
  EXPECT_EQ(setpack::ceil_of(Weight(7, 2)), 4);
  EXPECT_EQ(setpack::floor_of(Weight(-7, 2)), -4);
  EXPECT_EQ(setpack::ceil_of(Weight(-7, 2)), -3);
  EXPECT_EQ(setpack::floor_of(Weight(6)), 6);
  EXPECT_EQ(setpack::ceil_of(Weight(6)), 6);
}
