#include "chemoflux/rational.hpp"

#include <regex>
#include <vector>

namespace chemoflux::exact {

Rational parse_rational(const std::string& text) {
  static const std::regex fraction(R"(^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$)");
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)\.(\d+)\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, fraction)) {
    Rational q(mpz_class(m[1].str(), 10), m[2].matched ? mpz_class(m[2].str(), 10) : mpz_class(1));
    if (q.get_den() == 0) throw InvalidArgument("rational with zero denominator: " + text);
    q.canonicalize();
    return q;
  }
  if (std::regex_match(text, m, decimal)) {
    const std::string digits = m[2].str() + m[3].str();
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, m[3].str().size());
    Rational q(mpz_class(digits.empty() ? "0" : digits, 10), scale);
    q.canonicalize();
    return m[1].str() == "-" ? Rational(-q) : q;
  }
  throw InvalidArgument("not an exact rational: '" + text + "'");
}

std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_[{0, 0}] = c;
}

Polynomial Polynomial::alpha() {
  Polynomial x;
  x.terms_[{1, 0}] = 1;
  return x;
}

Polynomial Polynomial::p() {
  Polynomial x;
  x.terms_[{0, 1}] = 1;
  return x;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find({0, 0});
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree_alpha() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first);
  return d;
}

int Polynomial::degree_p() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.second);
  return d;
}

Rational Polynomial::operator()(const Rational& a, const Rational& p) const {
  std::vector<Rational> pa(degree_alpha() + 1), pp(degree_p() + 1);
  pa[0] = 1;
  pp[0] = 1;
  for (std::size_t i = 1; i < pa.size(); ++i) pa[i] = pa[i - 1] * a;
  for (std::size_t i = 1; i < pp.size(); ++i) pp[i] = pp[i - 1] * p;
  Rational sum = 0;
  for (const auto& [k, c] : terms_) sum += c * pa[k.first] * pp[k.second];
  return sum;
}

void Polynomial::add_term(const Key& k, const Rational& c) {
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (c != 0) terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  Polynomial out;
  for (const auto& [k1, c1] : terms_)
    for (const auto& [k2, c2] : o.terms_) out.add_term({k1.first + k2.first, k1.second + k2.second}, c1 * c2);
  *this = std::move(out);
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out;
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest total degree first reads most naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [k, c] = *it;
    Rational mag = abs(c);
    const bool neg = c < 0;
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    std::string mono;
    if (k.first > 0) mono += k.first == 1 ? "a" : "a^" + std::to_string(k.first);
    if (k.second > 0) mono += std::string(mono.empty() ? "" : "*") + (k.second == 1 ? "p" : "p^" + std::to_string(k.second));
    if (mono.empty())
      out += mag.get_str();
    else if (mag == 1)
      out += mono;
    else
      out += mag.get_str() + "*" + mono;
  }
  return out;
}

// ---------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DenominatorZero("rational function with zero denominator");
  normalize();
}

RationalFunction RationalFunction::alpha() { return {Polynomial::alpha(), Polynomial(1)}; }
RationalFunction RationalFunction::p() { return {Polynomial::p(), Polynomial(1)}; }
RationalFunction RationalFunction::frac(long n, long d) { return RationalFunction(Rational(n, d)); }

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (den_.is_constant()) {
    const Rational d = den_.constant_term();
    if (d != 1) {
      num_ *= Polynomial(Rational(1) / d);
      den_ = Polynomial(1);
    }
  }
}

bool RationalFunction::depends_on_p() const { return num_.degree_p() > 0 || den_.degree_p() > 0; }

Rational RationalFunction::operator()(const Rational& a, const Rational& p) const {
  const Rational d = den_(a, p);
  if (d == 0)
    throw DenominatorZero("denominator " + den_.str() + " vanishes at (alpha, p) = (" + to_string(a) + ", " +
                          to_string(p) + ")");
  return num_(a, p) / d;
}

bool RationalFunction::identically_equal(const RationalFunction& o) const {
  return (num_ * o.den_ - o.num_ * den_).is_zero();
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
  }
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) { return *this *= o.reciprocal(); }

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction RationalFunction::reciprocal() const {
  if (num_.is_zero()) throw DenominatorZero("reciprocal of the zero function");
  return {den_, num_};
}

RationalFunction RationalFunction::pow(int k) const {
  if (k < 0) return reciprocal().pow(-k);
  RationalFunction r(1);
  for (int i = 0; i < k; ++i) r *= *this;
  return r;
}

std::string RationalFunction::str() const {
  if (den_ == Polynomial(1)) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace chemoflux::exact
