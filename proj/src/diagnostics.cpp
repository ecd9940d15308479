#include "chemoflux/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace chemoflux {
namespace {

// Tolerance below zero that a density may carry from roundoff before it is
// treated as a positivity violation.
constexpr double kNegativeSlack = 1e-13;

void require_nonnegative(const ScalarField& n, const char* what) {
  if (n.size() > 0 && n.min() < -kNegativeSlack)
    throw InvalidArgument(std::string(what) + ": density has negative values");
}

ScalarField clamped_power(const ScalarField& n, double s) {
  return ScalarField(n.spec(), n.values().max(0.0).pow(s));
}

double grad_l2_squared(const ScalarField& f, BoundaryKind kind) {
  return l2_norm_squared(gradient(f, kind));
}

bool is_periodic(const SimParams& params) { return params.domain.mode == BoundaryMode::periodic; }

}  // namespace

std::array<double, 5> monitored_exponents(double alpha) {
  return {1.0, 1.0 + alpha, 2.0, 1.0 + 2.0 * alpha, std::numeric_limits<double>::infinity()};
}

EntropyValues entropy(const ScalarField& n) {
  require_nonnegative(n, "entropy");
  ScalarField s(n.spec()), a(n.spec());
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    const double v = n[i];
    if (v < 1e-300) continue;
    const double l = std::log(v);
    s[i] = v * l;
    a[i] = v * std::abs(l);
  }
  return {integrate(s), integrate(a)};
}

double weighted_moment(const ScalarField& n) {
  const DomainSpec& spec = n.spec();
  if (spec.mode != BoundaryMode::periodic)
    throw UnsupportedMode("weighted_moment is defined for the periodic whole-space proxy only");
  require_nonnegative(n, "weighted_moment");
  const ScalarField weight = sample(spec, [](const std::array<double, 3>& x) {
    return std::sqrt(1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  });
  return integrate(ScalarField(spec, weight.values() * n.values().max(0.0)));
}

double energy_EM(const FieldState& state, const SimParams& params) {
  const ScalarField& n = state.n;
  double value = entropy(n).absolute_value;
  if (n.spec().mode == BoundaryMode::periodic) value += 2.0 * weighted_moment(n);
  value += integrate(clamped_power(n, 1.0 + params.alpha));
  value += grad_l2_squared(state.c, BoundaryKind::mirror);
  value += 0.5 * (params.em_weight + 2.0) * l2_norm_squared(state.u);
  return value;
}

double dissipation_D(const FieldState& state, const SimParams& params) {
  const double a = params.alpha;
  double value = grad_l2_squared(clamped_power(state.n, 0.5 * (1.0 + a)), BoundaryKind::mirror);
  value += grad_l2_squared(clamped_power(state.n, 0.5 * (1.0 + 2.0 * a)), BoundaryKind::mirror);
  const ScalarField lap_c = laplacian(state.c, BoundaryKind::mirror);
  value += integrate(ScalarField(lap_c.spec(), lap_c.values().square()));
  for (int k = 0; k < state.u.dim(); ++k) value += grad_l2_squared(state.u[k], BoundaryKind::no_slip);
  return value;
}

DiagnosticsRecord compute_record(const FieldState& state, const SimParams& params,
                                 const DiagnosticsRecord* previous) {
  DiagnosticsRecord r;
  const ScalarField& n = state.n;
  r.t = state.t;
  r.mass = integrate(n);
  const EntropyValues ent = entropy(n);
  r.entropy = ent.signed_value;
  r.abs_entropy = ent.absolute_value;
  r.moment = n.spec().mode == BoundaryMode::periodic ? weighted_moment(n)
                                                     : std::numeric_limits<double>::quiet_NaN();
  const auto ps = monitored_exponents(params.alpha);
  for (std::size_t k = 0; k < ps.size(); ++k) r.lp_norms_n[k] = lp_norm(n, ps[k]);
  r.grad_c_l2 = std::sqrt(grad_l2_squared(state.c, BoundaryKind::mirror));
  r.u_l2 = std::sqrt(l2_norm_squared(state.u));
  r.e_m = energy_EM(state, params);
  r.d = dissipation_D(state, params);
  r.d_accum = previous ? previous->d_accum + 0.5 * (r.t - previous->t) * (r.d + previous->d) : 0.0;
  r.min_n = n.min();
  r.max_n = n.max();
  r.min_c = state.c.min();
  r.max_c = state.c.max();
  r.div_residual = lp_norm(divergence(state.u, BoundaryKind::no_slip), std::numeric_limits<double>::infinity());
  return r;
}

double recompute_em(const DiagnosticsRecord& r, const SimParams& params) {
  double value = r.abs_entropy;
  if (!std::isnan(r.moment)) value += 2.0 * r.moment;
  value += std::pow(r.lp_norms_n[1], 1.0 + params.alpha);
  value += r.grad_c_l2 * r.grad_c_l2;
  value += 0.5 * (params.em_weight + 2.0) * r.u_l2 * r.u_l2;
  return value;
}

namespace {

bool record_finite(const DiagnosticsRecord& r, bool periodic) {
  const double scalars[] = {r.t,     r.mass,  r.entropy, r.abs_entropy, r.grad_c_l2,
                            r.u_l2,  r.e_m,   r.d,       r.d_accum,     r.min_n,
                            r.min_c, r.max_c, r.max_n,   r.div_residual};
  for (double v : scalars)
    if (!std::isfinite(v)) return false;
  for (double v : r.lp_norms_n)
    if (!std::isfinite(v)) return false;
  return periodic ? std::isfinite(r.moment) : true;
}

}  // namespace

WeakClassReport weak_class_check(const std::vector<DiagnosticsRecord>& series,
                                 const SimParams& params, double ceiling) {
  if (series.empty()) throw InvalidArgument("weak_class_check: empty series");
  WeakClassReport rep;
  rep.ceiling = ceiling;
  const bool periodic = is_periodic(params);
  for (const auto& r : series) {
    if (!record_finite(r, periodic)) {
      if (rep.finite) rep.first_nonfinite_time = r.t;
      rep.finite = false;
      continue;
    }
    const double entropy_part = r.abs_entropy + (periodic ? 2.0 * r.moment : 0.0);
    rep.sup_entropy_part = std::max(rep.sup_entropy_part, entropy_part);
    rep.sup_lp_part = std::max(rep.sup_lp_part, std::pow(r.lp_norms_n[1], 1.0 + params.alpha));
    rep.sup_grad_c_sq = std::max(rep.sup_grad_c_sq, r.grad_c_l2 * r.grad_c_l2);
    rep.sup_u_part = std::max(rep.sup_u_part, 0.5 * (params.em_weight + 2.0) * r.u_l2 * r.u_l2);
    rep.sup_em = std::max(rep.sup_em, r.e_m);
    rep.d_integral = r.d_accum;
    if (r.e_m > ceiling && rep.within_ceiling) {
      rep.within_ceiling = false;
      rep.ceiling_exceeded_time = r.t;
    }
  }
  return rep;
}

BoundedClassReport bounded_class_check(const std::vector<DiagnosticsRecord>& series,
                                       const SimParams& params, double multiple) {
  if (series.empty()) throw InvalidArgument("bounded_class_check: empty series");
  if (!(multiple > 0.0)) throw InvalidArgument("bounded_class_check: multiple must be positive");
  BoundedClassReport rep;
  rep.multiple = multiple;
  rep.max_n0 = series.front().max_n;
  if (params.tau != 0) {
    rep.fluid_warning = true;
    rep.warning = "bounded-class check applied to a Navier-Stokes run (tau = 1); the bound is stated for tau = 0";
  }
  const double limit = multiple * rep.max_n0;
  for (const auto& r : series) {
    rep.sup_max_n = std::max(rep.sup_max_n, r.max_n);
    for (std::size_t k = 0; k < rep.sup_lp_norms.size(); ++k)
      rep.sup_lp_norms[k] = std::max(rep.sup_lp_norms[k], r.lp_norms_n[k]);
    if (!(r.max_n <= limit) && rep.passed) {
      rep.passed = false;
      rep.exceeded_time = r.t;
    }
  }
  return rep;
}

std::vector<std::string> csv_header() {
  return {"t",        "mass",  "entropy",     "abs_entropy",      "moment",
          "n_l1",     "n_l1_plus_alpha",      "n_l2",             "n_l1_plus_2alpha",
          "n_linf",   "grad_c_l2",            "u_l2",             "e_m",
          "d",        "d_accum",              "min_n",            "min_c",
          "max_c",    "max_n",                "div_residual"};
}

void write_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& series) {
  const auto header = csv_header();
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  char buf[32];
  auto put = [&](double v, bool first = false) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) os << ',';
    os << buf;
  };
  for (const auto& r : series) {
    put(r.t, true);
    put(r.mass);
    put(r.entropy);
    put(r.abs_entropy);
    put(r.moment);
    for (double v : r.lp_norms_n) put(v);
    put(r.grad_c_l2);
    put(r.u_l2);
    put(r.e_m);
    put(r.d);
    put(r.d_accum);
    put(r.min_n);
    put(r.min_c);
    put(r.max_c);
    put(r.max_n);
    put(r.div_residual);
    os << '\n';
  }
}

}  // namespace chemoflux
