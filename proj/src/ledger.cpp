#include "chemoflux/ledger.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace chemoflux::ledger {
namespace {

const RF A = RF::alpha();
const RF P = RF::p();

RF q(long n, long d = 1) { return RF::frac(n, d); }

Constraint lt(RF l, RF r, std::string text) { return {std::move(l), true, std::move(r), std::move(text)}; }
Constraint le(RF l, RF r, std::string text) { return {std::move(l), false, std::move(r), std::move(text)}; }

Bound in(std::string e, std::optional<RF> lo, bool lo_closed, std::optional<RF> hi, bool hi_closed) {
  return {std::move(e), std::move(lo), lo_closed, std::move(hi), hi_closed};
}
Bound open(std::string e, RF lo, RF hi) { return in(std::move(e), std::move(lo), false, std::move(hi), false); }
Bound above(std::string e, RF lo) { return in(std::move(e), std::move(lo), false, std::nullopt, false); }
Bound below(std::string e, RF hi) { return in(std::move(e), std::nullopt, false, std::move(hi), false); }

NormFactor lq(const std::string& field, RF leb, RF outer, RF inner = 1) {
  return {field, 0, std::move(leb), std::move(inner), std::move(outer)};
}
// ||grad f^inner||_2 ^ outer
NormFactor grad(const std::string& field, RF inner, RF outer) {
  return {field, 1, RF(2), std::move(inner), std::move(outer)};
}
// ||grad f||_q ^ outer
NormFactor grad_lq(const std::string& field, RF leb, RF outer) {
  return {field, 1, std::move(leb), RF(1), std::move(outer)};
}
// ||D^2 f||_q ^ outer
NormFactor hess(const std::string& field, RF leb, RF outer) {
  return {field, 2, std::move(leb), RF(1), std::move(outer)};
}

// theta with 1/target = (1 - theta)/lo + theta/hi.
RF interpolation_theta(const RF& target, const RF& lo, const RF& hi) {
  return (lo.reciprocal() - target.reciprocal()) / (lo.reciprocal() - hi.reciprocal());
}

ScanBox alpha_box(Rational lo, Rational hi, bool capped = false) {
  ScanBox b;
  b.alpha_lo = std::move(lo);
  b.alpha_hi = std::move(hi);
  b.alpha_hi_capped = capped;
  return b;
}

ScanBox alpha_p_box(Rational lo, Rational hi, bool alpha_capped, std::vector<RF> p_lower,
                    std::vector<RF> p_upper, bool p_capped) {
  ScanBox b = alpha_box(std::move(lo), std::move(hi), alpha_capped);
  b.uses_p = true;
  b.p_lower = std::move(p_lower);
  b.p_upper = std::move(p_upper);
  b.p_upper_capped = p_capped;
  return b;
}

// Finite caps on unbounded scan directions.
const Rational kAlphaCap(4);
const RF kPCap(20);

std::vector<Constraint> low_alpha_region() { return {lt(q(1, 8), A, "1/8 < a"), le(A, q(1, 3), "a <= 1/3")}; }

std::vector<Constraint> low_window_region() {
  auto r = low_alpha_region();
  r.push_back(lt(1 + A, P, "1 + a < p"));
  r.push_back(lt(P, 1 + 4 * A, "p < 1 + 4a"));
  return r;
}

ScanBox low_window_box() { return alpha_p_box(Rational(1, 8), Rational(1, 3), false, {1 + A}, {1 + 4 * A}, false); }

// ------------------------------------------------------------ energy estimate

void add_energy_entries(std::vector<LedgerEntry>& out) {
  const std::vector<Constraint> low = {lt(q(1, 6), A, "1/6 < a"), le(A, q(1, 3), "a <= 1/3")};
  const std::vector<Constraint> mid = {lt(q(1, 3), A, "1/3 < a"), le(A, 1, "a <= 1")};

  {
    LedgerEntry e;
    e.id = "case-i-low";
    e.description = "Energy estimate for 1/6 < a <= 1/3: powers of n multiplying |grad c|^2 after integration by parts";
    e.region = low;
    e.expressions = {{"1-3a", 1 - 3 * A, "1 - 3a"}, {"1-2a", 1 - 2 * A, "1 - 2a"}, {"(1-a)/2", (1 - A) / 2, "(1 - a)/2"}};
    e.bounds = {in("1-3a", RF(0), true, q(2, 3), false), open("1-2a", 0, q(2, 3)), above("(1-a)/2", 0)};
    e.box = alpha_box(Rational(1, 6), Rational(1, 3));
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "case-i-low-III";
    e.description = "||n||_{2-a}^{2-a} <= C ||n||_1^{(1+4a)/(2+3a)} ||grad n^{(1+a)/2}||_2^{(6-6a)/(2+3a)}";
    e.region = low;
    const RF g = (6 - 6 * A) / (2 + 3 * A);
    const RF m = (1 + 4 * A) / (2 + 3 * A);
    e.expressions = {{"(6-6a)/(2+3a)", g, "(6 - 6a)/(2 + 3a)"},
                     {"(1+4a)/(2+3a)", m, "(1 + 4a)/(2 + 3a)"},
                     {"2-a", 2 - A, "2 - a"}};
    e.bounds = {in("(6-6a)/(2+3a)", q(4, 3), true, RF(2), false), above("(1+4a)/(2+3a)", 0),
                open("2-a", 1, 3 + 3 * A)};
    e.scaling = Scaling{{lq("n", 2 - A, 2 - A)}, {lq("n", 1, m), grad("n", (1 + A) / 2, g)}};
    e.box = alpha_box(Rational(1, 6), Rational(1, 3));
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "case-i-low-IV";
    e.description = "||n||_2^2 <= C ||n||_1^{(1+6a)/(2+6a)} ||grad n^{(1+2a)/2}||_2^{6/(2+6a)}";
    e.region = low;
    const RF g = 6 / (2 + 6 * A);
    const RF m = (1 + 6 * A) / (2 + 6 * A);
    e.expressions = {{"6/(2+6a)", g, "6/(2 + 6a)"}, {"(1+6a)/(2+6a)", m, "(1 + 6a)/(2 + 6a)"}};
    e.bounds = {in("6/(2+6a)", q(3, 2), true, RF(2), false), above("(1+6a)/(2+6a)", 0)};
    e.scaling = Scaling{{lq("n", 2, 2)}, {lq("n", 1, m), grad("n", (1 + 2 * A) / 2, g)}};
    e.box = alpha_box(Rational(1, 6), Rational(1, 3));
    e.notes.push_back(
        "After Young's inequality the constant term carries ||n0||_1^{(1+6a)/(2+3a)}; "
        "only the base exponent (1+6a)/(2+6a) enters the interpolation and is checked here.");
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "case-i-low-VI";
    e.description = "||n||_{6/5}^2 <= C ||n||_1^{(5(1+2a)-2)/(2+6a)} ||grad n^{(1+2a)/2}||_2^{2/(2+6a)}";
    e.region = low;
    const RF g = 2 / (2 + 6 * A);
    const RF m = (5 * (1 + 2 * A) - 2) / (2 + 6 * A);
    e.expressions = {{"6/5", q(6, 5), "6/5"}, {"2/(2+6a)", g, "2/(2 + 6a)"}, {"(5(1+2a)-2)/(2+6a)", m, "(5(1+2a) - 2)/(2 + 6a)"}};
    e.bounds = {open("6/5", 1, 3 + 6 * A), open("2/(2+6a)", 0, 2), above("(5(1+2a)-2)/(2+6a)", 0)};
    e.scaling = Scaling{{lq("n", q(6, 5), 2)}, {lq("n", 1, m), grad("n", (1 + 2 * A) / 2, g)}};
    e.box = alpha_box(Rational(1, 6), Rational(1, 3));
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "case-i-mid";
    e.description = "Energy estimate for 1/3 < a <= 1: the n^{1-a} |grad c|^2 window and the Young exponent";
    e.region = mid;
    e.expressions = {{"1-a", 1 - A, "1 - a"}, {"6/(2+6a)", 6 / (2 + 6 * A), "6/(2 + 6a)"}};
    e.bounds = {in("1-a", RF(0), true, q(2, 3), false), open("6/(2+6a)", 0, 2)};
    e.box = alpha_box(Rational(1, 3), Rational(1));
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "case-i-mid-IV";
    e.description = "||n||_2^2 interpolation reused for 1/3 < a <= 1";
    e.region = mid;
    const RF g = 6 / (2 + 6 * A);
    const RF m = (1 + 6 * A) / (2 + 6 * A);
    e.expressions = {{"6/(2+6a)", g, "6/(2 + 6a)"}, {"(1+6a)/(2+6a)", m, "(1 + 6a)/(2 + 6a)"}};
    e.bounds = {open("6/(2+6a)", 0, 2), above("(1+6a)/(2+6a)", 0)};
    e.scaling = Scaling{{lq("n", 2, 2)}, {lq("n", 1, m), grad("n", (1 + 2 * A) / 2, g)}};
    e.box = alpha_box(Rational(1, 3), Rational(1));
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "case-i-high";
    e.description = "||n||_{1+a}^{1+a} <= C ||n||_1^{(2+2a)/(2+3a)} ||grad n^{(1+a)/2}||_2^{6a/(2+3a)} for a > 1";
    e.region = {lt(1, A, "1 < a"), lt(A, 2, "a < 2")};
    const RF g = 6 * A / (2 + 3 * A);
    const RF m = (2 + 2 * A) / (2 + 3 * A);
    e.expressions = {{"(1+a)/2", (1 + A) / 2, "(1 + a)/2"}, {"6a/(2+3a)", g, "6a/(2 + 3a)"}, {"(2+2a)/(2+3a)", m, "(2 + 2a)/(2 + 3a)"}};
    e.bounds = {above("(1+a)/2", 1), below("6a/(2+3a)", 2), above("(2+2a)/(2+3a)", 0)};
    e.scaling = Scaling{{lq("n", 1 + A, 1 + A)}, {lq("n", 1, m), grad("n", (1 + A) / 2, g)}};
    e.box = alpha_box(Rational(1), Rational(2));
    e.notes.push_back(
        "Open question: the case is asserted for every a > 1, but 6a/(2+3a) < 2 holds only for a < 2; "
        "the region is restricted to 1 < a < 2 and a >= 2 is left unresolved.");
    out.push_back(std::move(e));
  }
}

// ------------------------------------------------- L^p bootstrap, a > 1/3

void add_high_entries(std::vector<LedgerEntry>& out) {
  const std::vector<Constraint> region = {lt(q(1, 3), A, "1/3 < a"), lt(1 + A, P, "1 + a < p"), lt(3 * A, P, "3a < p")};
  const ScanBox box = alpha_p_box(Rational(1, 3), kAlphaCap, true, {1 + A, 3 * A}, {kPCap}, true);
  const RF s = (1 + 2 * A) / 2;

  {
    LedgerEntry e;
    e.id = "lp-high-I";
    e.description = "||n||_{6p/(2p+3a)}^2 <= C ||n||_1^{2-E} ||grad n^{(1+2a)/2}||_2^{2-delta_p}";
    e.region = region;
    const RF lq_ = 6 * P / (2 * P + 3 * A);
    const RF E = (1 + 2 * A) * (4 * P - 3 * A) / (2 * P * (1 + 3 * A));
    const RF dp = (6 * A - 2) / (1 + 3 * A) + 3 * A / (P * (1 + 3 * A));
    e.expressions = {{"q", lq_, "6p/(2p + 3a)"},
                     {"E", E, "(1 + 2a)(4p - 3a)/(2p(1 + 3a))"},
                     {"delta_p", dp, "(6a - 2)/(1 + 3a) + 3a/(p(1 + 3a))"}};
    e.bounds = {in("q", RF(1), true, 3 + 6 * A, true), open("E", 0, 2), open("delta_p", 0, 2)};
    e.identities = {{"E is the interpolation exponent", E / 2, interpolation_theta(lq_, 1, 3 + 6 * A)},
                    {"gradient exponent 2E/(1+2a) = 2 - delta_p", 2 * E / (1 + 2 * A), 2 - dp},
                    {"4/(1+3a) - 3a/(p(1+3a)) = 2 - delta_p", 4 / (1 + 3 * A) - 3 * A / (P * (1 + 3 * A)), 2 - dp}};
    e.scaling = Scaling{{lq("n", lq_, 2)}, {lq("n", 1, 2 - E), grad("n", s, 2 - dp)}};
    e.box = box;
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "lp-high-II";
    e.description = "||n||_{2p/(p+a)}^2 <= C ||n||_1^{2-E'} ||grad n^{(1+2a)/2}||_2^{2-delta'_p}, with the Holder/Sobolev step for u . grad c";
    e.region = region;
    const RF q2 = 2 * P / (P + A);
    const RF hq = 6 * P / (2 * P + 3 * A);
    const RF E = 3 * (1 + 2 * A) * (P - A) / (2 * P * (1 + 3 * A));
    const RF dpp = (-1 + 6 * A) / (1 + 3 * A) + 3 * A / (P * (1 + 3 * A));
    e.expressions = {{"q'", q2, "2p/(p + a)"},
                     {"6p/(2p+3a)", hq, "6p/(2p + 3a)"},
                     {"E'", E, "3(1 + 2a)(p - a)/(2p(1 + 3a))"},
                     {"delta'_p", dpp, "(-1 + 6a)/(1 + 3a) + 3a/(p(1 + 3a))"}};
    e.bounds = {in("q'", RF(1), true, 3 + 6 * A, true), below("q'", 3),
                in("6p/(2p+3a)", RF(2), true, RF(6), true), open("E'", 0, 2), open("delta'_p", 0, 2)};
    e.identities = {{"E' is the interpolation exponent", E / 2, interpolation_theta(q2, 1, 3 + 6 * A)},
                    {"Holder: 1/q = 1/6 + (p+3a)/(6p)", hq.reciprocal(), q(1, 6) + (P + 3 * A) / (6 * P)},
                    {"Sobolev: 3q'/(3-q') = 6p/(p+3a)", 3 * q2 / (3 - q2), 6 * P / (P + 3 * A)},
                    {"gradient exponent 2E'/(1+2a) = 2 - delta'_p", 2 * E / (1 + 2 * A), 2 - dpp},
                    {"3/(1+3a) - 3a/(p(1+3a)) = 2 - delta'_p", 3 / (1 + 3 * A) - 3 * A / (P * (1 + 3 * A)), 2 - dpp}};
    e.scaling = Scaling{{lq("n", q2, 2)}, {lq("n", 1, 2 - E), grad("n", s, 2 - dpp)}};
    e.box = box;
    e.notes.push_back("The lower limit 3a < p is what puts 6p/(2p+3a) in [2, 6].");
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "lp-high-vorticity";
    e.description = "||n||_2^2 <= C ||n||_1^{2-(3+3a)/(2+3a)} ||grad n^{(1+a)/2}||_2^{6/(2+3a)} (vorticity L^2 estimate, tau = 0)";
    e.region = {lt(q(1, 3), A, "1/3 < a")};
    const RF g = 6 / (2 + 3 * A);
    const RF base = 2 - (3 + 3 * A) / (2 + 3 * A);
    e.expressions = {{"6/(2+3a)", g, "6/(2 + 3a)"}, {"2-(3+3a)/(2+3a)", base, "2 - (3 + 3a)/(2 + 3a)"}};
    e.bounds = {open("6/(2+3a)", 0, 2), above("2-(3+3a)/(2+3a)", 0)};
    e.identities = {{"(3+3a)/(2+3a) is the interpolation exponent", (3 + 3 * A) / (2 * (2 + 3 * A)),
                     interpolation_theta(RF(2), 1, 3 + 3 * A)}};
    e.scaling = Scaling{{lq("n", 2, 2)}, {lq("n", 1, base), grad("n", (1 + A) / 2, g)}};
    e.box = alpha_box(Rational(1, 3), kAlphaCap, true);
    e.notes.push_back(
        "With ||n||_{1+a} as base norm the inequality is not dilation invariant. "
        "The exponents are exactly those of interpolation between L^1 and L^{3+3a}, so the L^1 base is catalogued.");
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "lp-high-moser";
    e.description = "||n||_{p-a}^{p-a} <= ||n||_1^{a/(p-1)} ||n||_p^{p(p-a-1)/(p-1)} (L^infinity bootstrap)";
    e.region = {lt(q(1, 3), A, "1/3 < a"), lt(1 + A, P, "1 + a < p")};
    const RF beta = A / (P - 1);
    e.expressions = {{"beta", beta, "a/(p - 1)"}, {"p-a", P - A, "p - a"}};
    e.bounds = {open("beta", 0, 1), open("p-a", 1, P)};
    e.identities = {{"p(1 - beta) = p(p-a-1)/(p-1)", P * (1 - beta), P * (P - A - 1) / (P - 1)}};
    e.scaling = Scaling{{lq("n", P - A, P - A)}, {lq("n", 1, beta), lq("n", P, P * (P - A - 1) / (P - 1))}};
    e.box = alpha_p_box(Rational(1, 3), kAlphaCap, true, {1 + A}, {kPCap}, true);
    out.push_back(std::move(e));
  }
}

// ---------------------------------------------- L^p bootstrap, 1/8 < a <= 1/3

void add_low_entries(std::vector<LedgerEntry>& out) {
  const RF r1 = (6 + 6 * A) / (5 + 14 * A - 3 * P);
  const RF r2 = P - A + 1;
  const RF s1 = 6 * r1 / (6 + r1);
  const RF s2 = 6 * r2 / (6 + r2);
  const RF top = 3 * P + 3 * A;
  const RF sp = (P + A) / 2;

  {
    LedgerEntry e;
    e.id = "moser-window";
    e.description = "Holder split of n^{p-3a} |grad c|^2 with exponents (1+a)/(p-3a), (1+a)/(1+4a-p) and the Sobolev step to ||D^2 c||_{r1}";
    e.region = low_window_region();
    const RF h1 = (1 + A) / (P - 3 * A);
    const RF h2 = (1 + A) / (1 + 4 * A - P);
    e.expressions = {{"(1+a)/(p-3a)", h1, "(1 + a)/(p - 3a)"}, {"(1+a)/(1+4a-p)", h2, "(1 + a)/(1 + 4a - p)"}, {"r1", r1, "(6 + 6a)/(5 + 14a - 3p)"}};
    e.bounds = {above("(1+a)/(p-3a)", 1), above("(1+a)/(1+4a-p)", 1), below("r1", 3)};
    e.identities = {{"conjugate Holder exponents", h1.reciprocal() + h2.reciprocal(), RF(1)},
                    {"Sobolev: 3 r1/(3 - r1) = 2(1+a)/(1+4a-p)", 3 * r1 / (3 - r1), 2 * h2}};
    e.scaling = Scaling{{grad_lq("c", 2 * h2, 2)}, {hess("c", r1, 2)}};
    e.box = low_window_box();
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "r1-embedding";
    e.description = "Interpolation ranges for r1 and 6 r1/(6 + r1)";
    e.region = low_window_region();
    e.expressions = {{"r1", r1, "(6 + 6a)/(5 + 14a - 3p)"}, {"6r1/(6+r1)", s1, "6 r1/(6 + r1)"}};
    e.bounds = {open("r1", 1 + A, top), in("r1", RF(1), true, RF(3), false), open("6r1/(6+r1)", 1, top)};
    e.box = low_window_box();
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "r2-embedding";
    e.description = "Interpolation ranges for r2 = p - a + 1 and 6 r2/(6 + r2)";
    e.region = low_window_region();
    e.expressions = {{"r2", r2, "p - a + 1"}, {"6r2/(6+r2)", s2, "6 r2/(6 + r2)"}};
    e.bounds = {open("r2", 1 + A, top), open("6r2/(6+r2)", 1, top), open("r2", 2, 6)};
    e.box = low_window_box();
    out.push_back(std::move(e));
  }

  struct ThetaSpec {
    const char* id;
    RF theta;
    const char* theta_text;
    RF delta;
    const char* delta_text;
    RF target;  // interpolated exponent
    RF lo;      // lower endpoint
    RF power;   // power on the left-hand side
    const char* description;
  };
  const RF th1 = (P + A) * (3 * P - 14 * A + 1) / (2 * (3 * P + 2 * A - 1));
  const RF th2 = 3 * (P + A) * (P - 3 * A) / (2 * (1 + A) * (3 * P + 3 * A - 1));
  const RF th3 = 3 * (P + A) * (r2 - 1 - A) / (r2 * (3 * P + 2 * A - 1));
  const RF th4 = (P + A) * (5 * r2 - 6) / (r2 * (6 * P + 6 * A - 2));
  const std::vector<ThetaSpec> thetas = {
      {"theta-1", th1, "(p + a)(3p - 14a + 1)/(2(3p + 2a - 1))", 4 * th1 / (P + A), "4 theta1/(p + a)", r1, 1 + A, 2,
       "||n||_{r1}^2 <= C ||n||_{1+a}^{2(1-theta1)} ||grad n^{(p+a)/2}||_2^{delta1}"},
      {"theta-2", th2, "3(p + a)(p - 3a)/(2(1 + a)(3p + 3a - 1))", 4 * th2 / (P + A), "4 theta2/(p + a)", s1, 1, 2,
       "||n||_{6r1/(6+r1)}^2 <= C ||n||_1^{2(1-theta2)} ||grad n^{(p+a)/2}||_2^{delta2}"},
      {"theta-3", th3, "3(p + a)(r2 - 1 - a)/(r2(3p + 2a - 1))", 2 * r2 * th3 / (P + A), "2 r2 theta3/(p + a)", r2, 1 + A, r2,
       "||n||_{r2}^{r2} <= C ||n||_{1+a}^{r2(1-theta3)} ||grad n^{(p+a)/2}||_2^{delta3}"},
      {"theta-4", th4, "(p + a)(5 r2 - 6)/(r2(6p + 6a - 2))", 2 * r2 * th4 / (P + A), "2 r2 theta4/(p + a)", s2, 1, r2,
       "||n||_{6r2/(6+r2)}^{r2} <= C ||n||_1^{r2(1-theta4)} ||grad n^{(p+a)/2}||_2^{delta4}"},
  };
  for (const auto& t : thetas) {
    LedgerEntry e;
    e.id = t.id;
    e.description = t.description;
    e.region = low_window_region();
    const std::string n = std::string(t.id).substr(6);
    const std::string th_name = "theta" + n, d_name = "delta" + n;
    e.expressions = {{th_name, t.theta, t.theta_text}, {d_name, t.delta, t.delta_text}};
    e.bounds = {open(th_name, 0, 1), open(d_name, 0, 2)};
    e.identities = {{th_name + " is the interpolation exponent", t.theta, interpolation_theta(t.target, t.lo, top)}};
    e.scaling = Scaling{{lq("n", t.target, t.power)}, {lq("n", t.lo, t.power * (1 - t.theta)), grad("n", sp, t.delta)}};
    e.box = low_window_box();
    if (std::string(t.id) == "theta-1")
      e.notes.push_back("theta1 is reported with its observed lattice range; it is not assumed to stay in (0, 1).");
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "theta-5";
    e.description = "||grad c||_{r2}^{r2} <= ||grad c||_2^{r2(1-theta5)} ||D^2 c||_2^{delta5}";
    e.region = low_window_region();
    const RF th5 = 3 * (P - A - 1) / (2 * r2);
    const RF d5 = r2 * th5;
    e.expressions = {{"r2", r2, "p - a + 1"}, {"theta5", th5, "3(p - a - 1)/(2 r2)"}, {"delta5", d5, "r2 theta5"}};
    e.bounds = {open("theta5", 0, 1), open("delta5", 0, 2)};
    e.identities = {{"theta5 is the interpolation exponent", th5, interpolation_theta(r2, 2, 6)},
                    {"delta5 = 3(p - a - 1)/2", d5, 3 * (P - A - 1) / 2}};
    e.scaling = Scaling{{grad_lq("c", r2, r2)}, {grad_lq("c", 2, r2 * (1 - th5)), hess("c", 2, d5)}};
    e.box = low_window_box();
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "lp-low-vorticity";
    e.description = "||n||_2^2 <= C ||n||_{1+a}^{2-3(1+2a)(1-a)/(2+5a)} ||grad n^{(1+2a)/2}||_2^{(6-6a)/(2+5a)}";
    e.region = low_alpha_region();
    const RF g = (6 - 6 * A) / (2 + 5 * A);
    const RF E = 3 * (1 + 2 * A) * (1 - A) / (2 + 5 * A);
    e.expressions = {{"(6-6a)/(2+5a)", g, "(6 - 6a)/(2 + 5a)"}, {"3(1+2a)(1-a)/(2+5a)", E, "3(1 + 2a)(1 - a)/(2 + 5a)"}};
    e.bounds = {open("(6-6a)/(2+5a)", 0, 2), open("3(1+2a)(1-a)/(2+5a)", 0, 2)};
    e.identities = {{"interpolation exponent", E / 2, interpolation_theta(RF(2), 1 + A, 3 + 6 * A)},
                    {"gradient exponent", 2 * E / (1 + 2 * A), g}};
    e.scaling = Scaling{{lq("n", 2, 2)}, {lq("n", 1 + A, 2 - E), grad("n", (1 + 2 * A) / 2, g)}};
    e.box = alpha_box(Rational(1, 8), Rational(1, 3));
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "r1-window";
    e.description = "2 <= r1 <= 6 on (2 + 11a)/3 < p < 1 + 4a";
    e.region = low_alpha_region();
    e.region.push_back(lt((2 + 11 * A) / 3, P, "(2 + 11a)/3 < p"));
    e.region.push_back(lt(P, 1 + 4 * A, "p < 1 + 4a"));
    e.expressions = {{"r1", r1, "(6 + 6a)/(5 + 14a - 3p)"}};
    e.bounds = {in("r1", RF(2), true, RF(6), true)};
    e.box = alpha_p_box(Rational(1, 8), Rational(1, 3), false, {(2 + 11 * A) / 3}, {1 + 4 * A}, false);
    out.push_back(std::move(e));
  }
  const RF p0 = q(3, 2) - 3 * A / 4;
  {
    LedgerEntry e;
    e.id = "p0-range";
    e.description = "p0 = 3/2 - 3a/4 lies in [1, 1 + 4a)";
    e.region = low_alpha_region();
    e.expressions = {{"p0", p0, "3/2 - 3a/4"}};
    e.bounds = {in("p0", RF(1), true, 1 + 4 * A, false)};
    e.box = alpha_box(Rational(1, 8), Rational(1, 3));
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "lp-low-I";
    e.description = "||n||_{6p/(2p+3a)}^2 <= C ||n||_{p0}^{2-E} ||grad n^{(p0+a)/2}||_2^{2-delta_p} with p0 = 3/2 - 3a/4";
    e.region = low_alpha_region();
    e.region.push_back(lt(1 + A, P, "1 + a < p"));
    const RF hq = 6 * P / (2 * P + 3 * A);
    const RF E = (p0 + A) * (6 * P - 2 * P * p0 - 3 * A * p0) / (P * (2 * p0 + 3 * A));
    const RF grad_exp = (12 - 4 * p0) / (2 * p0 + 3 * A) - 6 * A * p0 / (P * (2 * p0 + 3 * A));
    const RF dp = 2 - grad_exp;
    e.expressions = {{"p0", p0, "3/2 - 3a/4"},
                     {"q", hq, "6p/(2p + 3a)"},
                     {"E", E, "(p0 + a)(6p - 2p p0 - 3a p0)/(p(2p0 + 3a))"},
                     {"delta_p", dp, "2 - (12 - 4p0)/(2p0 + 3a) + 6a p0/(p(2p0 + 3a))"}};
    e.bounds = {open("q", p0, 3 * p0 + 3 * A), open("E", 0, 2), open("delta_p", 0, 2)};
    e.identities = {{"E is the interpolation exponent", E / 2, interpolation_theta(hq, p0, 3 * p0 + 3 * A)},
                    {"gradient exponent 2E/(p0+a)", 2 * E / (p0 + A), grad_exp}};
    e.scaling = Scaling{{lq("n", hq, 2)}, {lq("n", p0, 2 - E), grad("n", (p0 + A) / 2, grad_exp)}};
    e.box = alpha_p_box(Rational(1, 8), Rational(1, 3), false, {1 + A}, {kPCap}, true);
    e.notes.push_back(
        "An exponent on ||n||_{3p0+3a} with 2(2p0+3a) in the denominator is inconsistent; interpolation and the "
        "gradient exponent both require p(2p0+3a). The consistent form is catalogued.");
    out.push_back(std::move(e));
  }
  {
    LedgerEntry e;
    e.id = "lp-low-II";
    e.description = "||n||_{2p/(p+a)}^2 <= C ||n||_{1+a}^{2-E'} ||grad n^{(1+2a)/2}||_2^{2-delta'_p}";
    e.region = low_alpha_region();
    e.region.push_back(lt(1 + A, P, "1 + a < p"));
    const RF q2 = 2 * P / (P + A);
    const RF E = 3 * (1 + 2 * A) * (P - A * P - A - A * A) / (P * (2 + 5 * A));
    const RF dpp = (-2 + 16 * A) / (2 + 5 * A) + (6 * A + 6 * A * A) / (P * (2 + 5 * A));
    const RF thr = A * (1 + A) / (1 - A);
    e.expressions = {{"a(1+a)/(1-a)", thr, "a(1 + a)/(1 - a)"},
                     {"q'", q2, "2p/(p + a)"},
                     {"E'", E, "3(1 + 2a)(p - ap - a - a^2)/(p(2 + 5a))"},
                     {"delta'_p", dpp, "(-2 + 16a)/(2 + 5a) + (6a + 6a^2)/(p(2 + 5a))"}};
    e.bounds = {open("a(1+a)/(1-a)", 0, 1 + A), open("q'", 1 + A, 3 + 6 * A), open("E'", 0, 2), open("delta'_p", 0, 2)};
    e.identities = {{"E' is the interpolation exponent", E / 2, interpolation_theta(q2, 1 + A, 3 + 6 * A)},
                    {"gradient exponent 2E'/(1+2a) = 2 - delta'_p", 2 * E / (1 + 2 * A), 2 - dpp}};
    e.scaling = Scaling{{lq("n", q2, 2)}, {lq("n", 1 + A, 2 - E), grad("n", (1 + 2 * A) / 2, 2 - dpp)}};
    e.box = alpha_p_box(Rational(1, 8), Rational(1, 3), false, {1 + A}, {kPCap}, true);
    out.push_back(std::move(e));
  }
}

std::string bound_value_text(const RF& f) { return f.str(); }

bool within(const Rational& v, const Bound& b, const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
  if (b.lower && (b.lower_closed ? v < *lo : v <= *lo)) return false;
  if (b.upper && (b.upper_closed ? v > *hi : v >= *hi)) return false;
  return true;
}

std::optional<Rational> try_eval(const RF& f, const Rational& a, const Rational& p) {
  try {
    return f(a, p);
  } catch (const exact::DenominatorZero&) {
    return std::nullopt;
  }
}

Rational lattice(const Rational& lo, const Rational& hi, int i, int density) {
  return lo + (hi - lo) * Rational(i, density + 1);
}

RF dilation_power(const NormFactor& f) {
  RF d = RF(f.derivatives);
  if (f.lebesgue) d -= RF(3) / *f.lebesgue;
  return f.outer * d;
}

}  // namespace

bool Constraint::holds(const Rational& a, const Rational& p) const {
  const Rational l = lhs(a, p), r = rhs(a, p);
  return strict ? l < r : l <= r;
}

std::string Bound::describe() const {
  std::string out = expression + " in ";
  out += lower ? (lower_closed ? "[" : "(") + bound_value_text(*lower) : std::string("(-inf");
  out += ", ";
  out += upper ? bound_value_text(*upper) + (upper_closed ? "]" : ")") : std::string("inf)");
  return out;
}

bool LedgerEntry::in_region(const Rational& a, const Rational& p) const {
  for (const auto& c : region) {
    try {
      if (!c.holds(a, p)) return false;
    } catch (const exact::DenominatorZero&) {
      return false;
    }
  }
  return true;
}

std::string LedgerEntry::region_text() const {
  std::string out;
  for (const auto& c : region) out += (out.empty() ? "" : ", ") + c.text;
  return out;
}

const NamedExpression& LedgerEntry::expression(const std::string& name) const {
  for (const auto& e : expressions)
    if (e.name == name) return e;
  throw InvalidArgument("ledger entry " + id + " has no expression '" + name + "'");
}

std::vector<LedgerEntry> build_ledger() {
  std::vector<LedgerEntry> out;
  add_energy_entries(out);
  add_high_entries(out);
  add_low_entries(out);
  return out;
}

const LedgerEntry& find_entry(const std::vector<LedgerEntry>& catalog, const std::string& id) {
  for (const auto& e : catalog)
    if (e.id == id) return e;
  throw InvalidArgument("no ledger entry with id '" + id + "'");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inapplicable: return "inapplicable";
  }
  return "?";
}

CheckResult check_entry(const LedgerEntry& entry, const Rational& a, const Rational& p) {
  CheckResult res;
  const bool inside = entry.in_region(a, p);
  auto eval = [&](const RF& f, const std::string& what) -> std::optional<Rational> {
    auto v = try_eval(f, a, p);
    if (!v && inside)
      throw exact::DenominatorZero("ledger entry " + entry.id + ": " + what + " is undefined at (" +
                                   exact::to_string(a) + ", " + exact::to_string(p) + ") inside its region");
    return v;
  };

  std::map<std::string, std::optional<Rational>> values;
  for (const auto& e : entry.expressions) {
    values[e.name] = eval(e.value, e.name);
    res.values.push_back({e.name, values[e.name]});
  }
  bool all_ok = true;
  for (const auto& b : entry.bounds) {
    BoundResult br;
    br.expression = b.expression;
    br.bound = b.describe();
    auto it = values.find(b.expression);
    if (it == values.end()) throw InvalidArgument("ledger entry " + entry.id + ": bound on unknown expression " + b.expression);
    br.value = it->second;
    const auto lo = b.lower ? eval(*b.lower, "lower bound of " + b.expression) : std::nullopt;
    const auto hi = b.upper ? eval(*b.upper, "upper bound of " + b.expression) : std::nullopt;
    const bool defined = br.value && (!b.lower || lo) && (!b.upper || hi);
    br.satisfied = defined && within(*br.value, b, lo, hi);
    all_ok = all_ok && br.satisfied;
    res.bounds.push_back(std::move(br));
  }
  for (const auto& id : entry.identities) {
    const auto l = eval(id.lhs, id.name), r = eval(id.rhs, id.name);
    const bool holds = l && r && *l == *r;
    all_ok = all_ok && holds;
    res.identities.push_back({id.name, holds});
  }
  res.status = !inside ? Status::inapplicable : (all_ok ? Status::pass : Status::fail);
  return res;
}

ScalingResult scaling_check(const LedgerEntry& entry) {
  ScalingResult res;
  if (!entry.scaling) return res;
  res.has_data = true;
  const Scaling& s = *entry.scaling;
  std::set<std::string> fields;
  for (const auto& f : s.lhs) {
    res.lhs_dilation += dilation_power(f);
    fields.insert(f.field);
  }
  for (const auto& f : s.rhs) {
    res.rhs_dilation += dilation_power(f);
    fields.insert(f.field);
  }
  res.passed = res.lhs_dilation.identically_equal(res.rhs_dilation);
  for (const auto& name : fields) {
    RF l, r;
    for (const auto& f : s.lhs)
      if (f.field == name) l += f.inner * f.outer;
    for (const auto& f : s.rhs)
      if (f.field == name) r += f.inner * f.outer;
    res.fields.push_back(name);
    res.passed = res.passed && l.identically_equal(r);
    res.lhs_amplitude.push_back(std::move(l));
    res.rhs_amplitude.push_back(std::move(r));
  }
  return res;
}

ScanSummary scan_region(const LedgerEntry& entry, int density) {
  if (density < 2) throw InvalidArgument("scan_region: density must be >= 2");
  ScanSummary sum;
  const ScanBox& box = entry.box;
  std::map<std::string, ExpressionRange> ranges;
  for (const auto& e : entry.expressions) ranges[e.name] = {e.name, std::nullopt, std::nullopt};
  constexpr std::size_t kMaxReportedFailures = 50;

  auto p_limits = [&](const Rational& a) -> std::optional<std::pair<Rational, Rational>> {
    if (!box.uses_p) return std::pair<Rational, Rational>{0, 0};
    std::optional<Rational> lo, hi;
    for (const auto& f : box.p_lower) {
      auto v = try_eval(f, a, 0);
      if (!v) return std::nullopt;
      if (!lo || *v > *lo) lo = *v;
    }
    for (const auto& f : box.p_upper) {
      auto v = try_eval(f, a, 0);
      if (!v) return std::nullopt;
      if (!hi || *v < *hi) hi = *v;
    }
    if (!lo || !hi || *lo >= *hi) return std::nullopt;
    return std::pair<Rational, Rational>{*lo, *hi};
  };

  auto record_interior = [&](const Rational& a, const Rational& p) {
    if (!entry.in_region(a, p)) return;
    ++sum.interior_points;
    const CheckResult r = check_entry(entry, a, p);
    for (const auto& v : r.values) {
      if (!v.value) continue;
      auto& rg = ranges[v.name];
      if (!rg.min || *v.value < *rg.min) rg.min = v.value;
      if (!rg.max || *v.value > *rg.max) rg.max = v.value;
    }
    if (r.status == Status::pass) {
      ++sum.interior_pass;
      return;
    }
    if (sum.interior_failures.size() < kMaxReportedFailures) {
      PointFailure f{a, p, {}};
      for (const auto& b : r.bounds)
        if (!b.satisfied) f.failed.push_back(b.bound);
      for (const auto& i : r.identities)
        if (!i.holds) f.failed.push_back(i.name);
      sum.interior_failures.push_back(std::move(f));
    }
  };

  auto record_collar = [&](const Rational& a, const Rational& p) {
    ++sum.collar_points;
    CheckResult r;
    try {
      r = check_entry(entry, a, p);
    } catch (const exact::DenominatorZero&) {
      return;
    }
    if (r.status == Status::inapplicable) ++sum.collar_inapplicable;
    for (const auto& b : r.bounds)
      if (!b.satisfied) ++sum.collar_bound_violations;
  };

  if (box.alpha_lo < box.alpha_hi) {
    const Rational da = (box.alpha_hi - box.alpha_lo) / (density + 1);
    for (int i = 1; i <= density; ++i) {
      const Rational a = lattice(box.alpha_lo, box.alpha_hi, i, density);
      const auto lim = p_limits(a);
      if (!lim) continue;
      if (!box.uses_p) {
        record_interior(a, 0);
        continue;
      }
      const auto& [plo, phi] = *lim;
      for (int j = 1; j <= density; ++j) record_interior(a, lattice(plo, phi, j, density));
      const Rational dp = (phi - plo) / (density + 1);
      record_collar(a, plo - dp);
      if (!box.p_upper_capped) record_collar(a, phi + dp);
    }
    std::vector<Rational> collar_alphas = {box.alpha_lo - da};
    if (!box.alpha_hi_capped) collar_alphas.push_back(box.alpha_hi + da);
    for (const auto& a : collar_alphas) {
      if (!box.uses_p) {
        record_collar(a, 0);
        continue;
      }
      const auto lim = p_limits(a);
      if (!lim) continue;
      for (int j = 1; j <= density; ++j) record_collar(a, lattice(lim->first, lim->second, j, density));
    }
  }
  for (const auto& e : entry.expressions) sum.ranges.push_back(ranges[e.name]);
  return sum;
}

}  // namespace chemoflux::ledger
