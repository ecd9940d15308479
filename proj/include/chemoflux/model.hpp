#pragma once

#include <array>
#include <limits>
#include <optional>
#include <set>
#include <string>

#include <Eigen/Core>

namespace chemoflux {

enum class BoundaryMode { periodic, neumann };

std::string to_string(BoundaryMode mode);

/// Structured box. In periodic mode the box is centered at the origin and
/// stands in for whole space; in neumann mode n and c have zero normal
/// derivative on the walls and u satisfies no-slip.
struct DomainSpec {
  int dim = 3;
  BoundaryMode mode = BoundaryMode::periodic;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  std::array<int, 3> resolution{8, 8, 8};

  double cell_size(int axis) const { return lengths[axis] / resolution[axis]; }
  double min_cell_size() const;
  double max_cell_size() const;
  double cell_volume() const;
  double volume() const;
  Eigen::Index cell_count() const;

  /// Throws InvalidArgument listing the first violated invariant.
  void validate() const;

  /// Compares mode and the active axes only; entries beyond `dim` are ignored.
  bool operator==(const DomainSpec& o) const;
};

struct SimParams {
  double alpha = 0.5;
  int tau = 1;
  double rho = 0.01;
  double em_weight = 1.0;
  std::array<double, 3> phi_gradient{0.0, 0.0, 0.0};
  double t_final = 1.0;
  double cfl_safety = 0.4;
  /// Upper cap on the adaptive step. Infinity means uncapped.
  double dt_max = std::numeric_limits<double>::infinity();
  DomainSpec domain;

  void validate() const;
};

/// chi(c) = chi_offset + chi_slope * c,  kappa(c) = kappa_coeff * c^kappa_power.
struct ChiKappaModel {
  double chi_offset = 1.0;
  double chi_slope = 0.0;
  double kappa_coeff = 1.0;
  double kappa_power = 1.0;

  void validate() const;

  double chi(double c) const;
  double chi_prime(double c) const;
  double kappa(double c) const;
  double kappa_prime(double c) const;
  /// kappa(c)/c, continuous at c = 0. Used by the implicit consumption factor.
  double kappa_over_c(double c) const;
};

double eval_chi(const ChiKappaModel& model, double c);
double eval_kappa(const ChiKappaModel& model, double c);

enum class Clause { i, ii, iii };

std::string to_string(Clause clause);

/// Which clauses of the weak-solution assumption (alpha > 0 family) and the
/// bounded-weak assumption (alpha > 1/8 family) hold for a model.
struct AssumptionCase {
  std::set<Clause> weak_cases;
  std::set<Clause> bounded_cases;
  /// Lower bound of chi' over [0, c_max], present when clause (ii) holds anywhere.
  std::optional<double> chi_witness;
  /// Lower bound of kappa' over [0, c_max], present when clause (iii) holds anywhere.
  std::optional<double> kappa_witness;

  bool any() const { return !weak_cases.empty() || !bounded_cases.empty(); }
};

AssumptionCase classify_assumption(const ChiKappaModel& model,
                                   const SimParams& params, double c_max);

std::string format_cases(const std::set<Clause>& cases);

}  // namespace chemoflux
