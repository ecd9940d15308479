#pragma once

#include <map>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "chemoflux/error.hpp"

namespace chemoflux::exact {

using Rational = mpq_class;

/// Evaluating a rational function where its denominator vanishes.
class DenominatorZero : public Error {
 public:
  using Error::Error;
};

/// Parses "3", "-1/3" or "0.125" exactly. Throws InvalidArgument on anything else.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

/// Polynomial in the two symbols alpha and p with rational coefficients.
/// Keys are (degree in alpha, degree in p); zero coefficients are never stored.
class Polynomial {
 public:
  using Key = std::pair<int, int>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT: implicit constant
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT

  static Polynomial alpha();
  static Polynomial p();

  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (0 when absent).
  Rational constant_term() const;
  int degree_alpha() const;
  int degree_p() const;

  Rational operator()(const Rational& alpha, const Rational& p) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial operator-() const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  std::string str() const;

 private:
  void add_term(const Key& k, const Rational& c);
  std::map<Key, Rational> terms_;
};

/// num / den, kept unreduced except that constant denominators are folded
/// into the numerator. Equality is decided by cross-multiplication.
class RationalFunction {
 public:
  RationalFunction() : num_(0), den_(1) {}
  RationalFunction(const Rational& c) : num_(c), den_(1) {}  // NOLINT
  RationalFunction(long c) : num_(c), den_(1) {}             // NOLINT
  RationalFunction(int c) : num_(static_cast<long>(c)), den_(1) {}  // NOLINT
  RationalFunction(Polynomial num, Polynomial den);

  static RationalFunction alpha();
  static RationalFunction p();
  static RationalFunction frac(long n, long d);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool depends_on_p() const;

  /// Exact value. Throws DenominatorZero where the denominator vanishes.
  Rational operator()(const Rational& alpha, const Rational& p) const;

  /// True iff the two functions agree as rational functions.
  bool identically_equal(const RationalFunction& o) const;

  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  RationalFunction operator-() const;

  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }

  RationalFunction pow(int k) const;
  RationalFunction reciprocal() const;

  std::string str() const;

 private:
  void normalize();
  Polynomial num_;
  Polynomial den_;
};

}  // namespace chemoflux::exact
