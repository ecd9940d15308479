#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "chemoflux/ledger.hpp"

using namespace chemoflux;
using namespace chemoflux::ledger;

namespace {

const std::vector<LedgerEntry>& catalog() {
  static const std::vector<LedgerEntry> c = build_ledger();
  return c;
}

Rational value_of(const CheckResult& r, const std::string& name) {
  for (const auto& v : r.values)
    if (v.name == name) {
      if (!v.value) throw std::runtime_error("undefined value " + name);
      return *v.value;
    }
  throw std::runtime_error("no value " + name);
}

const RF A = RF::alpha();
const RF P = RF::p();

// theta with 1/target = (1 - theta)/lo + theta/hi, written out independently.
RF theta(const RF& target, const RF& lo, const RF& hi) {
  return (1 / lo - 1 / target) / (1 / lo - 1 / hi);
}

}  // namespace

TEST(Catalog, HasUniqueIdsAndEnoughEntries) {
  EXPECT_GE(catalog().size(), 20u);
  std::set<std::string> ids;
  for (const auto& e : catalog()) EXPECT_TRUE(ids.insert(e.id).second) << e.id;
  EXPECT_THROW(find_entry(catalog(), "no-such-entry"), InvalidArgument);
}

TEST(Examples, GradientExponentAtOneThird) {
  const CheckResult r = check_entry(find_entry(catalog(), "case-i-low-III"), Rational(1, 3), Rational(3, 2));
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_EQ(value_of(r, "(6-6a)/(2+3a)"), Rational(4, 3));
}

TEST(Examples, ThetaFiveAtQuarterAndThreeHalves) {
  const CheckResult r = check_entry(find_entry(catalog(), "theta-5"), Rational(1, 4), Rational(3, 2));
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_EQ(value_of(r, "theta5"), Rational(1, 6));
  EXPECT_EQ(value_of(r, "delta5"), Rational(3, 8));
}

TEST(Examples, OutsideTheRegionIsInapplicable) {
  const CheckResult high = check_entry(find_entry(catalog(), "lp-high-II"), Rational(1, 8), Rational(100));
  EXPECT_EQ(high.status, Status::inapplicable);
  EXPECT_LT(value_of(high, "delta'_p"), 0);

  const CheckResult low = check_entry(find_entry(catalog(), "lp-low-II"), Rational(1, 8), Rational(100));
  EXPECT_EQ(low.status, Status::inapplicable);
  EXPECT_EQ(value_of(low, "delta'_p"), Rational(9, 2800));
}

TEST(Regions, CaseILowBoundaries) {
  const LedgerEntry& e = find_entry(catalog(), "case-i-low");
  EXPECT_FALSE(e.in_region(Rational(1, 6), 0));
  EXPECT_TRUE(e.in_region(Rational(1, 6) + Rational(1, 1000000), 0));
  EXPECT_TRUE(e.in_region(Rational(1, 3), 0));
  EXPECT_FALSE(e.in_region(Rational(1, 3) + Rational(1, 1000000), 0));
  EXPECT_EQ(check_entry(e, Rational(1, 3), 0).status, Status::pass);
  EXPECT_EQ(check_entry(e, Rational(1, 2), 0).status, Status::inapplicable);
}

TEST(Scaling, EveryCataloguedInequalityIsHomogeneous) {
  for (const auto& e : catalog()) {
    if (!e.scaling) continue;
    const ScalingResult s = scaling_check(e);
    EXPECT_TRUE(s.has_data);
    EXPECT_TRUE(s.passed) << e.id;
  }
}

TEST(Scan, EveryEntryPassesOnACoarseLattice) {
  for (const auto& e : catalog()) {
    const ScanSummary s = scan_region(e, 16);
    EXPECT_GT(s.interior_points, 0u) << e.id;
    EXPECT_TRUE(s.all_interior_pass()) << e.id;
    EXPECT_EQ(s.collar_inapplicable, s.collar_points) << e.id;
  }
}

TEST(Scan, RejectsTinyDensity) {
  EXPECT_THROW(scan_region(catalog().front(), 1), InvalidArgument);
}

TEST(Scan, EmptyBoxHasNoInteriorPoints) {
  LedgerEntry e = find_entry(catalog(), "case-i-low");
  e.box.alpha_lo = Rational(1, 4);
  e.box.alpha_hi = Rational(1, 4);
  const ScanSummary s = scan_region(e, 10);
  EXPECT_EQ(s.interior_points, 0u);
  EXPECT_TRUE(s.all_interior_pass());
}

TEST(Scan, ThetaOneRangeStaysInsideTheUnitInterval) {
  const ScanSummary s = scan_region(find_entry(catalog(), "theta-1"), 30);
  ASSERT_TRUE(s.all_interior_pass());
  for (const auto& r : s.ranges) {
    if (r.name != "theta1") continue;
    ASSERT_TRUE(r.min && r.max);
    EXPECT_GT(*r.min, 0);
    EXPECT_LT(*r.max, 1);
  }
}

TEST(Corruption, PerturbedExponentFailsScaling) {
  LedgerEntry e = find_entry(catalog(), "case-i-low-III");
  ASSERT_TRUE(e.scaling);
  e.scaling->rhs.back().outer += RF::frac(1, 100);
  EXPECT_FALSE(scaling_check(e).passed);
}

TEST(Corruption, PerturbedBoundFailsTheScan) {
  LedgerEntry e = find_entry(catalog(), "case-i-low-III");
  e.bounds.front().lower = RF::frac(3, 2);  // 4/3 is attained at a = 1/3
  const ScanSummary s = scan_region(e, 12);
  EXPECT_FALSE(s.all_interior_pass());
  EXPECT_FALSE(s.interior_failures.empty());
}

TEST(Corruption, HigherIntegrabilityBaseBreaksDilationInvariance) {
  // Vorticity estimate with ||n||_{1+a} as base norm instead of ||n||_1.
  LedgerEntry e = find_entry(catalog(), "lp-high-vorticity");
  ASSERT_TRUE(e.scaling);
  auto& base = e.scaling->rhs.front();
  ASSERT_EQ(base.derivatives, 0);
  base.lebesgue = 1 + A;
  EXPECT_FALSE(scaling_check(e).passed);
}

TEST(Corruption, DoubledDenominatorInTheLowAlphaExponentIsInconsistent) {
  const RF p0 = RF::frac(3, 2) - 3 * A / 4;
  const RF q = 6 * P / (2 * P + 3 * A);
  const RF consistent = (p0 + A) * (6 * P - 2 * P * p0 - 3 * A * p0) / (P * (2 * p0 + 3 * A));
  const RF doubled = (p0 + A) * (6 * P - 2 * P * p0 - 3 * A * p0) / (2 * (2 * p0 + 3 * A));
  const RF th = theta(q, p0, 3 * p0 + 3 * A);
  EXPECT_TRUE((consistent / 2).identically_equal(th));
  EXPECT_FALSE((doubled / 2).identically_equal(th));

  LedgerEntry e = find_entry(catalog(), "lp-low-I");
  ASSERT_TRUE(e.scaling);
  e.scaling->rhs.front().outer = 2 - doubled;
  EXPECT_FALSE(scaling_check(e).passed);
}

TEST(Independent, InterpolationExponentsMatchHandDerivedForms) {
  // 1/(r) = (1-theta)/2 + theta/6 gives theta = 3(r - 2)/(2r).
  const RF r = P - A + 1;
  EXPECT_TRUE(theta(r, 2, 6).identically_equal(3 * (r - 2) / (2 * r)));
  const CheckResult c = check_entry(find_entry(catalog(), "theta-5"), Rational(1, 5), Rational(7, 5));
  EXPECT_EQ(value_of(c, "theta5"), theta(r, 2, 6)(Rational(1, 5), Rational(7, 5)));
}

TEST(Status, Names) {
  EXPECT_EQ(to_string(Status::pass), "pass");
  EXPECT_EQ(to_string(Status::fail), "fail");
  EXPECT_EQ(to_string(Status::inapplicable), "inapplicable");
}
