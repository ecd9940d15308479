#include <gtest/gtest.h>

#include "chemoflux/rational.hpp"

using namespace chemoflux;
using exact::Polynomial;
using exact::Rational;
using RF = exact::RationalFunction;

TEST(ParseRational, FractionsAndDecimalsAreExact) {
  EXPECT_EQ(exact::parse_rational("3"), Rational(3));
  EXPECT_EQ(exact::parse_rational("-1/3"), Rational(-1, 3));
  EXPECT_EQ(exact::parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(exact::parse_rational(" 4/6 "), Rational(2, 3));
  EXPECT_EQ(exact::parse_rational("-.5"), Rational(-1, 2));
  EXPECT_EQ(exact::parse_rational("0.1") * 10, Rational(1));
}

TEST(ParseRational, RejectsInexactOrMalformedInput) {
  for (const char* bad : {"", "1/0", "1e-3", "abc", "1/2/3", "0x10", "nan"})
    EXPECT_THROW(exact::parse_rational(bad), InvalidArgument) << bad;
}

TEST(Polynomial, Arithmetic) {
  const Polynomial a = Polynomial::alpha();
  const Polynomial p = Polynomial::p();
  const Polynomial f = (a + 1) * (a - 1);
  EXPECT_EQ(f, a * a - 1);
  EXPECT_EQ(f(Rational(3), 0), Rational(8));
  EXPECT_EQ((a * p - p * a).is_zero(), true);
  EXPECT_EQ((a * a * p).degree_alpha(), 2);
  EXPECT_EQ((a * a * p).degree_p(), 1);
  EXPECT_TRUE(Polynomial(Rational(5, 2)).is_constant());
  EXPECT_EQ((p + Rational(7)).constant_term(), Rational(7));
}

TEST(RationalFunction, IdentitiesAreDecidedSymbolically) {
  const RF A = RF::alpha();
  const RF P = RF::p();
  const RF lhs = 1 / (1 + A) + 1 / (1 - A);
  const RF rhs = 2 / (1 - A * A);
  EXPECT_TRUE(lhs.identically_equal(rhs));
  EXPECT_FALSE(lhs.identically_equal(rhs + RF::frac(1, 1000)));
  EXPECT_TRUE(((P * P - A * A) / (P - A)).identically_equal(P + A));
  EXPECT_EQ((A / P)(Rational(1, 2), Rational(3)), Rational(1, 6));
  EXPECT_TRUE(A.pow(3).identically_equal(A * A * A));
  EXPECT_TRUE(A.reciprocal().identically_equal(1 / A));
  EXPECT_FALSE(A.depends_on_p());
  EXPECT_TRUE((A + P).depends_on_p());
}

TEST(RationalFunction, VanishingDenominatorThrows) {
  const RF f = 1 / (RF::alpha() - RF::frac(1, 3));
  EXPECT_THROW(f(Rational(1, 3), 0), exact::DenominatorZero);
  EXPECT_EQ(f(Rational(1, 2), 0), Rational(6));
}
