#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chemoflux/model.hpp"
#include "chemoflux/state.hpp"

namespace chemoflux {

/// The p-values at which ||n||_p is monitored: {1, 1+alpha, 2, 1+2alpha, inf}.
std::array<double, 5> monitored_exponents(double alpha);

/// One time sample of every monitored functional.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double entropy = 0.0;      // int n log n
  double abs_entropy = 0.0;  // int n |log n|
  double moment = 0.0;       // int <x> n; NaN in neumann mode
  std::array<double, 5> lp_norms_n{};  // ordered as monitored_exponents
  double grad_c_l2 = 0.0;
  double u_l2 = 0.0;
  double e_m = 0.0;
  double d = 0.0;
  double d_accum = 0.0;
  double min_n = 0.0;
  double min_c = 0.0;
  double max_c = 0.0;
  double max_n = 0.0;
  double div_residual = 0.0;
};

struct EntropyValues {
  double signed_value;    // int n log n
  double absolute_value;  // int n |log n|
};

/// Cell-weighted n log n with 0 log 0 = 0 (cells below 1e-300 contribute 0).
EntropyValues entropy(const ScalarField& n);

/// int <x> n dx, <x> = sqrt(1+|x|^2), origin-centered box without wraparound.
/// Periodic (whole-space proxy) mode only.
double weighted_moment(const ScalarField& n);

/// E_M with M = params.em_weight. Neumann mode drops the moment term.
double energy_EM(const FieldState& state, const SimParams& params);

/// ||grad n^{(1+a)/2}||^2 + ||grad n^{(1+2a)/2}||^2 + ||lap c||^2 + ||grad u||^2.
double dissipation_D(const FieldState& state, const SimParams& params);

/// Full record at the state's time; d_accum is carried from `previous` by the
/// trapezoidal rule.
DiagnosticsRecord compute_record(const FieldState& state, const SimParams& params,
                                 const DiagnosticsRecord* previous = nullptr);

/// E_M rebuilt from a record's stored components.
double recompute_em(const DiagnosticsRecord& r, const SimParams& params);

struct WeakClassReport {
  double sup_entropy_part = 0.0;  // int n(|log n| + 2<x>)
  double sup_lp_part = 0.0;       // ||n||_{1+a}^{1+a}
  double sup_grad_c_sq = 0.0;     // ||grad c||^2
  double sup_u_part = 0.0;        // (M+2)/2 ||u||^2
  double sup_em = 0.0;
  double d_integral = 0.0;
  bool finite = true;
  std::optional<double> first_nonfinite_time;
  double ceiling = 0.0;
  bool within_ceiling = true;
  std::optional<double> ceiling_exceeded_time;

  bool passed() const { return finite && within_ceiling; }
};

/// Sup-in-time of each E_M component plus the accumulated dissipation.
/// `ceiling` bounds sup E_M; infinity disables that flag.
WeakClassReport weak_class_check(const std::vector<DiagnosticsRecord>& series,
                                 const SimParams& params, double ceiling);

struct BoundedClassReport {
  double max_n0 = 0.0;
  double sup_max_n = 0.0;
  double multiple = 0.0;
  bool passed = true;
  std::optional<double> exceeded_time;
  std::array<double, 5> sup_lp_norms{};
  bool fluid_warning = false;  // invoked on a Navier-Stokes (tau = 1) run
  std::string warning;
};

/// Checks sup_t max(n) <= multiple * max(n0).
BoundedClassReport bounded_class_check(const std::vector<DiagnosticsRecord>& series,
                                       const SimParams& params, double multiple);

std::vector<std::string> csv_header();

/// Header row plus one row per record, 17 significant digits.
void write_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& series);

}  // namespace chemoflux
