#include "chemoflux/model.hpp"

#include <algorithm>
#include <cmath>

#include "chemoflux/error.hpp"

namespace chemoflux {

std::string to_string(BoundaryMode mode) {
  return mode == BoundaryMode::periodic ? "periodic" : "neumann";
}

double DomainSpec::min_cell_size() const {
  double h = cell_size(0);
  for (int a = 1; a < dim; ++a) h = std::min(h, cell_size(a));
  return h;
}

double DomainSpec::max_cell_size() const {
  double h = cell_size(0);
  for (int a = 1; a < dim; ++a) h = std::max(h, cell_size(a));
  return h;
}

double DomainSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= cell_size(a);
  return v;
}

double DomainSpec::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= lengths[a];
  return v;
}

Eigen::Index DomainSpec::cell_count() const {
  Eigen::Index n = 1;
  for (int a = 0; a < dim; ++a) n *= resolution[a];
  return n;
}

bool DomainSpec::operator==(const DomainSpec& o) const {
  if (dim != o.dim || mode != o.mode) return false;
  for (int a = 0; a < dim; ++a)
    if (lengths[a] != o.lengths[a] || resolution[a] != o.resolution[a]) return false;
  return true;
}

void DomainSpec::validate() const {
  if (dim < 1 || dim > 3) throw InvalidArgument("domain.dim must be 1, 2 or 3");
  for (int a = 0; a < dim; ++a) {
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
      throw InvalidArgument("domain.lengths must be positive");
    if (resolution[a] < 8) throw InvalidArgument("domain.resolution must be >= 8");
  }
  if (mode == BoundaryMode::neumann && dim < 2)
    throw InvalidArgument("neumann mode requires dim >= 2 for the fluid solve");
}

void SimParams::validate() const {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  if (tau != 0 && tau != 1) throw InvalidArgument("tau must be 0 or 1");
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in (0,1)");
  if (!(em_weight > 0.0)) throw InvalidArgument("em_weight must be > 0");
  if (!(t_final >= 0.0)) throw InvalidArgument("t_final must be >= 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw InvalidArgument("cfl_safety must lie in (0,1]");
  if (!(dt_max > 0.0)) throw InvalidArgument("dt_max must be > 0");
  domain.validate();
}

void ChiKappaModel::validate() const {
  if (!(chi_offset >= 0.0)) throw InvalidArgument("chi_offset must be >= 0");
  if (!(chi_slope >= 0.0)) throw InvalidArgument("chi_slope must be >= 0");
  if (!(kappa_coeff >= 0.0)) throw InvalidArgument("kappa_coeff must be >= 0");
  if (!(kappa_power >= 1.0)) throw InvalidArgument("kappa_power must be >= 1");
  if (!(chi_offset + chi_slope > 0.0))
    throw InvalidArgument("chi_offset + chi_slope must be > 0");
}

double ChiKappaModel::chi(double c) const { return chi_offset + chi_slope * c; }

double ChiKappaModel::chi_prime(double) const { return chi_slope; }

double ChiKappaModel::kappa(double c) const {
  if (c == 0.0) return 0.0;
  return kappa_coeff * std::pow(c, kappa_power);
}

double ChiKappaModel::kappa_prime(double c) const {
  if (kappa_power == 1.0) return kappa_coeff;
  if (c == 0.0) return 0.0;
  return kappa_coeff * kappa_power * std::pow(c, kappa_power - 1.0);
}

double ChiKappaModel::kappa_over_c(double c) const {
  if (kappa_power == 1.0) return kappa_coeff;
  if (c <= 0.0) return 0.0;
  return kappa_coeff * std::pow(c, kappa_power - 1.0);
}

double eval_chi(const ChiKappaModel& model, double c) {
  if (c < 0.0) throw InvalidArgument("eval_chi: negative oxygen value (positivity violated)");
  return model.chi(c);
}

double eval_kappa(const ChiKappaModel& model, double c) {
  if (c < 0.0) throw InvalidArgument("eval_kappa: negative oxygen value (positivity violated)");
  return model.kappa(c);
}

std::string to_string(Clause clause) {
  switch (clause) {
    case Clause::i: return "i";
    case Clause::ii: return "ii";
    case Clause::iii: return "iii";
  }
  return "?";
}

std::string format_cases(const std::set<Clause>& cases) {
  std::string out = "{";
  bool first = true;
  for (Clause c : cases) {
    if (!first) out += ", ";
    out += to_string(c);
    first = false;
  }
  return out + "}";
}

AssumptionCase classify_assumption(const ChiKappaModel& model,
                                   const SimParams& params, double c_max) {
  if (!(c_max >= 0.0)) throw InvalidArgument("classify_assumption: c_max must be >= 0");
  const double alpha = params.alpha;

  // chi' is constant; kappa' = kb*m*c^(m-1) is nondecreasing on [0, c_max],
  // so both infima sit at c = 0.
  const double chi_inf = model.chi_prime(0.0);
  const double kappa_inf = model.kappa_prime(0.0);

  AssumptionCase result;
  if (chi_inf > 0.0) result.chi_witness = chi_inf;
  if (kappa_inf > 0.0) result.kappa_witness = kappa_inf;

  if (alpha > 1.0 / 6.0) {
    result.weak_cases.insert(Clause::i);
    result.bounded_cases.insert(Clause::i);
  }
  if (alpha > 0.0) {
    if (result.chi_witness) result.weak_cases.insert(Clause::ii);
    if (result.kappa_witness) result.weak_cases.insert(Clause::iii);
  }
  if (alpha > 1.0 / 8.0) {
    if (result.chi_witness) result.bounded_cases.insert(Clause::ii);
    if (result.kappa_witness) result.bounded_cases.insert(Clause::iii);
  }
  return result;
}

}  // namespace chemoflux
