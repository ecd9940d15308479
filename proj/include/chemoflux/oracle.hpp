#pragma once

#include <array>
#include <string>
#include <vector>

#include "chemoflux/model.hpp"
#include "chemoflux/state.hpp"

namespace chemoflux::oracle {

/// c(t) for dc/dt = -kappa(c) n_bar, c(0) = c_bar. Closed form for kappa
/// powers 1 and 2, adaptive Dormand-Prince integration otherwise.
double uniform_state_ode(double n_bar, double c_bar, const ChiKappaModel& model, double t);

/// Source-type self-similar solution of n_t = laplacian(n^m) with m = 1 + alpha:
///   n(x, t) = t^{-k} (C - K |x|^2 t^{-2k/d})_+^{1/(m-1)},
///   k = d/(d(m-1) + 2),  K = k(m-1)/(2 m d),
/// with C fixed by the total mass.
class Barenblatt {
 public:
  Barenblatt(double alpha, double mass, int dim);

  double operator()(const std::array<double, 3>& x, double t) const;
  double support_radius(double t) const;

  double k() const { return k_; }
  double K() const { return K_; }
  double C() const { return C_; }

 private:
  int dim_;
  double m_;
  double k_;
  double K_;
  double C_;
  double gamma_;
};

double barenblatt(double alpha, double mass, int dim, double t, const std::array<double, 3>& x);

/// Smooth periodic solution on [-pi, pi]^2 (extended constantly in z for 3D
/// boxes), with g = exp(-t):
///   n* = 1 + a_n g sin x cos y,  c* = 1 + a_c g cos x sin y,
///   u* = U g (sin x cos y, -cos x sin y, 0) = curl of U g sin x sin y e_z.
/// `forcing` returns the residual of the regularized system at (n*, c*, u*)
/// with zero pressure; the gradient part of the momentum residual is absorbed
/// by the projection.
struct ManufacturedProblem {
  SimParams params;
  ChiKappaModel model;
  double n_amplitude = 0.5;
  double c_amplitude = 0.3;
  double u_amplitude = 0.05;

  /// Throws InvalidArgument unless the domain is periodic with 2*pi sides in x and y.
  void validate(const DomainSpec& spec) const;

  FieldState exact(const DomainSpec& spec, double t) const;
  Sources forcing(const DomainSpec& spec, double t) const;
};

/// Errors against one refinement parameter (dt or h), with the observed
/// orders between consecutive levels.
struct ConvergenceSeries {
  std::string label;
  std::string parameter_name;
  std::vector<double> parameters;
  std::vector<double> errors;
  std::vector<double> orders;
};

struct StudyResult {
  std::string name;
  std::vector<ConvergenceSeries> series;
  bool passed = false;
  std::vector<std::string> notes;
};

/// log(e_i / e_{i+1}) / log(h_i / h_{i+1}) for consecutive levels.
std::vector<double> observed_orders(const std::vector<double>& parameters, const std::vector<double>& errors);

struct UniformStudySettings {
  double n_bar = 1.0;
  double c_bar = 1.0;
  double alpha = 0.5;
  ChiKappaModel model{1.0, 0.0, 0.2, 1.0};
  double t_final = 1.0;
  std::vector<double> time_steps{4e-3, 2e-3, 1e-3};
  double tolerance = 1e-4;   // relative c error required at the finest step
  double min_order = 0.9;
};

/// Solver on a spatially uniform periodic state against uniform_state_ode.
/// The error is the max over steps and cells of |c - c_exact| / c_exact.
StudyResult run_uniform_study(const UniformStudySettings& s);

struct BarenblattStudySettings {
  double alpha = 0.5;
  double mass = 1.0;
  double length = 4.0;
  double t_start = 0.01;
  double t_end = 0.1;
  double rho = 1e-6;
  std::vector<int> resolutions{64, 128, 256};
};

/// 1D porous-medium runs (chi = 0, kappa = 0, u = 0) started from the exact
/// profile at t_start. Passes when the L1 error at t_end strictly decreases.
StudyResult run_barenblatt_study(const BarenblattStudySettings& s);

struct ManufacturedStudySettings {
  ManufacturedProblem problem;
  int dim = 2;
  double t_final = 0.2;
  std::vector<int> resolutions{16, 32, 64};
  double min_order = 1.5;
};

ManufacturedStudySettings default_manufactured_settings();

/// Forced runs from the exact initial data with dt = stable_dt; L2 errors of
/// n, c and u at t_final. Passes when every observed order at the finest
/// pair is at least min_order.
StudyResult run_manufactured_study(const ManufacturedStudySettings& s);

std::string format_study(const StudyResult& r);

}  // namespace chemoflux::oracle
