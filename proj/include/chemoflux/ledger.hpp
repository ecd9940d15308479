#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chemoflux/rational.hpp"

namespace chemoflux::ledger {

using exact::Rational;
using RF = exact::RationalFunction;

/// lhs < rhs (strict) or lhs <= rhs.
struct Constraint {
  RF lhs;
  bool strict = true;
  RF rhs;
  std::string text;

  bool holds(const Rational& alpha, const Rational& p) const;
};

struct NamedExpression {
  std::string name;
  RF value;
  std::string text;  // human-readable formula as printed in the catalog
};

/// Required interval for a named expression; endpoints may depend on (alpha, p).
struct Bound {
  std::string expression;
  std::optional<RF> lower;
  bool lower_closed = false;
  std::optional<RF> upper;
  bool upper_closed = false;

  std::string describe() const;
};

/// Two expressions that must agree identically (checked pointwise and symbolically).
struct Identity {
  std::string name;
  RF lhs;
  RF rhs;
};

/// ||D^derivatives (field^inner)||_q ^ outer. An empty `lebesgue` means q = infinity.
struct NormFactor {
  std::string field;
  int derivatives = 0;
  std::optional<RF> lebesgue;
  RF inner = 1;
  RF outer = 1;
};

/// The two sides of an interpolation inequality LHS <= C * RHS, each a product
/// of norm powers, for the dilation/amplitude homogeneity check in 3D.
struct Scaling {
  std::vector<NormFactor> lhs;
  std::vector<NormFactor> rhs;
};

/// Parametrization of the region used to build scan lattices:
/// alpha in (alpha_lo, alpha_hi), p in (max p_lower(alpha), min p_upper(alpha)).
/// `*_capped` marks a side that is a finite scan cap on an unbounded region, so
/// no collar is generated there.
struct ScanBox {
  Rational alpha_lo;
  Rational alpha_hi;
  bool alpha_hi_capped = false;
  bool uses_p = false;
  std::vector<RF> p_lower;
  std::vector<RF> p_upper;
  bool p_upper_capped = false;
};

struct LedgerEntry {
  std::string id;
  std::string description;
  std::vector<Constraint> region;
  std::vector<NamedExpression> expressions;
  std::vector<Bound> bounds;
  std::vector<Identity> identities;
  std::optional<Scaling> scaling;
  ScanBox box;
  std::vector<std::string> notes;

  bool in_region(const Rational& alpha, const Rational& p) const;
  std::string region_text() const;
  const NamedExpression& expression(const std::string& name) const;
};

/// The fixed catalog of exponent claims.
std::vector<LedgerEntry> build_ledger();

/// Looks up a catalog entry by id; throws InvalidArgument when absent.
const LedgerEntry& find_entry(const std::vector<LedgerEntry>& catalog, const std::string& id);

enum class Status { pass, fail, inapplicable };
std::string to_string(Status s);

struct ExpressionValue {
  std::string name;
  std::optional<Rational> value;  // empty when undefined (denominator zero outside the region)
};

struct BoundResult {
  std::string expression;
  std::string bound;
  std::optional<Rational> value;
  bool satisfied = false;
};

struct IdentityResult {
  std::string name;
  bool holds = false;
};

struct CheckResult {
  Status status = Status::inapplicable;
  std::vector<ExpressionValue> values;
  std::vector<BoundResult> bounds;
  std::vector<IdentityResult> identities;
};

/// Exact evaluation at (alpha, p). Outside the region the status is
/// inapplicable but the values and bound outcomes are still reported as
/// diagnostics. A vanishing denominator inside the region throws.
CheckResult check_entry(const LedgerEntry& entry, const Rational& alpha, const Rational& p);

struct ScalingResult {
  bool has_data = false;
  bool passed = false;
  RF lhs_dilation;
  RF rhs_dilation;
  std::vector<std::string> fields;
  std::vector<RF> lhs_amplitude;  // per field, aligned with `fields`
  std::vector<RF> rhs_amplitude;
};

/// Power of lambda acquired by each side under n(x) -> n(lambda x) in three
/// dimensions, plus the power of a under f -> a f for every field. Passes iff
/// all of them agree identically.
ScalingResult scaling_check(const LedgerEntry& entry);

struct PointFailure {
  Rational alpha;
  Rational p;
  std::vector<std::string> failed;  // bound/identity descriptions
};

struct ExpressionRange {
  std::string name;
  std::optional<Rational> min;
  std::optional<Rational> max;
};

struct ScanSummary {
  std::size_t interior_points = 0;
  std::size_t interior_pass = 0;
  std::vector<PointFailure> interior_failures;
  std::size_t collar_points = 0;
  std::size_t collar_inapplicable = 0;
  std::size_t collar_bound_violations = 0;  // diagnostic: failing bounds outside the region
  std::vector<ExpressionRange> ranges;       // over interior points

  bool all_interior_pass() const { return interior_pass == interior_points; }
};

/// Rational lattice with `density` points per axis strictly inside the scan
/// box, plus a one-step collar just outside each non-capped side.
ScanSummary scan_region(const LedgerEntry& entry, int density);

}  // namespace chemoflux::ledger
