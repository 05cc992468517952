#include "riskpool/numeric.hpp"

#include <gtest/gtest.h>

namespace riskpool {
namespace {

TEST(ParseRationalTest, Fractions) {
  EXPECT_EQ(parse_rational("3/4"), ratio(3, 4));
  EXPECT_EQ(parse_rational("-6/8"), ratio(-3, 4));
  EXPECT_EQ(parse_rational("7"), Rational(7));
}

TEST(ParseRationalTest, DecimalsAreExact) {
  EXPECT_EQ(parse_rational("0.3"), ratio(3, 10));
  EXPECT_EQ(parse_rational("-.125"), ratio(-1, 8));
  EXPECT_EQ(parse_rational("2."), Rational(2));
  EXPECT_EQ(parse_rational("1e-3"), ratio(1, 1000));
  EXPECT_EQ(parse_rational("2.5E+2"), Rational(250));
}

TEST(ParseRationalTest, RejectsMalformedInput) {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", ".", "1.2.3", "1e", "--1", "1/2/3", "0x10"}) {
    EXPECT_THROW(parse_rational(bad), Error) << bad;
  }
}

TEST(FormatRationalTest, CanonicalForm) {
  EXPECT_EQ(format_rational(ratio(6, 8)), "3/4");
  EXPECT_EQ(format_rational(ratio(-4, 2)), "-2");
  EXPECT_EQ(format_rational(Rational(0)), "0");
}

TEST(FormatRationalTest, RoundTrips) {
  for (long n = -20; n <= 20; ++n) {
    for (long d = 1; d <= 7; ++d) {
      Rational q(n, d);
      q.canonicalize();
      EXPECT_EQ(parse_rational(format_rational(q)), q);
    }
  }
}

TEST(ExactPowerTest, PerfectRoots) {
  EXPECT_EQ(exact_power(Rational(4), ratio(1, 2)), Rational(2));
  EXPECT_EQ(exact_power(ratio(9, 4), ratio(3, 2)), ratio(27, 8));
  EXPECT_EQ(exact_power(Rational(8), ratio(-2, 3)), ratio(1, 4));
  EXPECT_EQ(exact_power(Rational(-27), ratio(1, 3)), Rational(-3));
  EXPECT_EQ(exact_power(Rational(5), Rational(0)), Rational(1));
}

TEST(ExactPowerTest, ZeroBase) {
  EXPECT_EQ(exact_power(Rational(0), ratio(1, 2)), Rational(0));
  EXPECT_FALSE(exact_power(Rational(0), Rational(-1)).has_value());
}

TEST(ExactPowerTest, IrrationalResultsAreRejected) {
  EXPECT_FALSE(exact_power(Rational(2), ratio(1, 2)).has_value());
  EXPECT_FALSE(exact_power(Rational(-4), ratio(1, 2)).has_value());
  EXPECT_THROW(NumTraits<Rational>::pow(Rational(3), ratio(1, 3)), Error);
}

TEST(FloatPowerTest, MatchesStdPow) {
  EXPECT_DOUBLE_EQ(power(2.0, ratio(1, 2)), std::sqrt(2.0));
  EXPECT_EQ(power(0.0, ratio(1, 3)), 0.0);
}

TEST(ToleranceTest, FloatComparisons) {
  using F = NumTraits<double>;
  EXPECT_TRUE(F::eq(1.0, 1.0 + 1e-10));
  EXPECT_FALSE(F::eq(1.0, 1.0 + 1e-8));
  EXPECT_TRUE(F::eq(0.0, 1e-13));
  EXPECT_FALSE(F::eq(0.0, 1e-11));
  EXPECT_TRUE(F::geq(1.0, 1.0 + 5e-10));
  EXPECT_FALSE(F::geq(1.0, 1.0 + 5e-9));
  EXPECT_TRUE(F::geq(1e6, 1e6 + 1e-4));
  EXPECT_FALSE(F::gt(1.0, 1.0 + 1e-12));
  EXPECT_TRUE(F::gt(1.0 + 1e-6, 1.0));
}

TEST(ToleranceTest, ExactComparisonsHaveNoSlack) {
  using Q = NumTraits<Rational>;
  const Rational tiny = ratio(1, 1000000000);
  EXPECT_FALSE(Q::geq(Rational(1), Rational(1) + tiny * tiny));
  EXPECT_TRUE(Q::eq(ratio(2, 4), ratio(1, 2)));
}

TEST(ToStringTest, Formats) {
  EXPECT_EQ(NumTraits<double>::to_string(0.25), "0.25");
  EXPECT_EQ(NumTraits<Rational>::to_string(ratio(1, 3)), "1/3");
}

}  // namespace
}  // namespace riskpool
