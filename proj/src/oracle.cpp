#include "chemoflux/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "chemoflux/error.hpp"
#include "chemoflux/solver.hpp"

namespace chemoflux::oracle {

double uniform_state_ode(double n_bar, double c_bar, const ChiKappaModel& model, double t) {
  if (!(std::isfinite(n_bar) && std::isfinite(c_bar) && std::isfinite(t)) || n_bar < 0.0 || c_bar < 0.0 || t < 0.0)
    throw InvalidArgument("uniform_state_ode: inputs must be finite and nonnegative");
  const double rate = model.kappa_coeff * n_bar;
  if (rate == 0.0 || c_bar == 0.0 || t == 0.0) return c_bar;
  if (model.kappa_power == 1.0) return c_bar * std::exp(-rate * t);
  if (model.kappa_power == 2.0) return c_bar / (1.0 + c_bar * rate * t);

  namespace ode = boost::numeric::odeint;
  double c = c_bar;
  auto rhs = [&](const double& x, double& dxdt, double) { dxdt = -rate * std::pow(std::max(x, 0.0), model.kappa_power); };
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<double>>(1e-13, 1e-13), rhs, c, 0.0, t,
                          t / 100.0);
  return std::max(c, 0.0);
}

// ---------------------------------------------------------------- Barenblatt

Barenblatt::Barenblatt(double alpha, double mass, int dim) : dim_(dim), m_(1.0 + alpha) {
  if (!(alpha > 0.0) || !(mass > 0.0) || dim < 1 || dim > 3)
    throw InvalidArgument("barenblatt: need alpha > 0, mass > 0 and dim in {1, 2, 3}");
  const double d = dim;
  k_ = d / (d * (m_ - 1.0) + 2.0);
  K_ = k_ * (m_ - 1.0) / (2.0 * m_ * d);
  gamma_ = 1.0 / (m_ - 1.0);
  // mass = pi^{d/2} Gamma(gamma+1) / Gamma(d/2+gamma+1) * K^{-d/2} * C^{gamma+d/2}
  const double shape = std::pow(std::numbers::pi, d / 2.0) * std::tgamma(gamma_ + 1.0) /
                       std::tgamma(d / 2.0 + gamma_ + 1.0) * std::pow(K_, -d / 2.0);
  C_ = std::pow(mass / shape, 1.0 / (gamma_ + d / 2.0));
}

double Barenblatt::operator()(const std::array<double, 3>& x, double t) const {
  if (!(t > 0.0)) throw InvalidArgument("barenblatt: t must be > 0");
  double r2 = 0.0;
  for (int a = 0; a < dim_; ++a) r2 += x[a] * x[a];
  const double base = C_ - K_ * r2 * std::pow(t, -2.0 * k_ / dim_);
  if (base <= 0.0) return 0.0;
  return std::pow(t, -k_) * std::pow(base, gamma_);
}

double Barenblatt::support_radius(double t) const { return std::sqrt(C_ / K_) * std::pow(t, k_ / dim_); }

double barenblatt(double alpha, double mass, int dim, double t, const std::array<double, 3>& x) {
  return Barenblatt(alpha, mass, dim)(x, t);
}

// ------------------------------------------------------------- manufactured

void ManufacturedProblem::validate(const DomainSpec& spec) const {
  spec.validate();
  if (spec.mode != BoundaryMode::periodic) throw InvalidArgument("manufactured problem requires a periodic box");
  if (spec.dim < 2) throw InvalidArgument("manufactured problem requires dim >= 2");
  for (int a = 0; a < 2; ++a)
    if (std::abs(spec.lengths[a] - 2.0 * std::numbers::pi) > 1e-12)
      throw InvalidArgument("manufactured problem requires side length 2*pi in x and y");
}

namespace {

struct Point {
  double sx, cx, sy, cy;
  explicit Point(const std::array<double, 3>& x)
      : sx(std::sin(x[0])), cx(std::cos(x[0])), sy(std::sin(x[1])), cy(std::cos(x[1])) {}
};

}  // namespace

FieldState ManufacturedProblem::exact(const DomainSpec& spec, double t) const {
  validate(spec);
  const double g = std::exp(-t);
  FieldState s(spec, t);
  s.n = sample(spec, [&](const auto& x) {
    const Point q(x);
    return 1.0 + n_amplitude * g * q.sx * q.cy;
  });
  s.c = sample(spec, [&](const auto& x) {
    const Point q(x);
    return 1.0 + c_amplitude * g * q.cx * q.sy;
  });
  s.u[0] = sample(spec, [&](const auto& x) {
    const Point q(x);
    return u_amplitude * g * q.sx * q.cy;
  });
  s.u[1] = sample(spec, [&](const auto& x) {
    const Point q(x);
    return -u_amplitude * g * q.cx * q.sy;
  });
  return s;
}

Sources ManufacturedProblem::forcing(const DomainSpec& spec, double t) const {
  validate(spec);
  const double g = std::exp(-t);
  const double a = params.alpha, rho = params.rho;
  const double An = n_amplitude * g, Ac = c_amplitude * g, U = u_amplitude * g;
  Sources out{ScalarField(spec), ScalarField(spec), VecField(spec)};

  out.n = sample(spec, [&](const auto& x) {
    const Point q(x);
    const double n = 1.0 + An * q.sx * q.cy;
    const double nx = An * q.cx * q.cy, ny = -An * q.sx * q.sy, lap_n = -2.0 * An * q.sx * q.cy;
    const double c = 1.0 + Ac * q.cx * q.sy;
    const double cx = -Ac * q.sx * q.sy, cy = Ac * q.cx * q.cy, lap_c = -2.0 * Ac * q.cx * q.sy;
    const double ux = U * q.sx * q.cy, uy = -U * q.cx * q.sy;
    const double n_t = -An * q.sx * q.cy;
    const double F1 = (1.0 + a) * std::pow(n + rho, a);
    const double F2 = (1.0 + a) * a * std::pow(n + rho, a - 1.0);
    const double diffusion = F2 * (nx * nx + ny * ny) + F1 * lap_n;
    const double chemotaxis = model.chi_prime(c) * n * (cx * cx + cy * cy) + model.chi(c) * (nx * cx + ny * cy) +
                              model.chi(c) * n * lap_c;
    return n_t + ux * nx + uy * ny - diffusion + chemotaxis;
  });
  out.c = sample(spec, [&](const auto& x) {
    const Point q(x);
    const double n = 1.0 + An * q.sx * q.cy;
    const double c = 1.0 + Ac * q.cx * q.sy;
    const double cx = -Ac * q.sx * q.sy, cy = Ac * q.cx * q.cy, lap_c = -2.0 * Ac * q.cx * q.sy;
    const double ux = U * q.sx * q.cy, uy = -U * q.cx * q.sy;
    const double c_t = -Ac * q.cx * q.sy;
    return c_t + ux * cx + uy * cy - lap_c + model.kappa(c) * n;
  });
  // u_t = -u and laplacian(u) = -2u, so u_t - laplacian(u) = u.
  const double tau = params.tau;
  for (int i = 0; i < spec.dim; ++i) {
    out.u[i] = sample(spec, [&](const auto& x) {
      const Point q(x);
      const double n = 1.0 + An * q.sx * q.cy;
      double u = 0.0, conv = 0.0;
      if (i == 0) {
        u = U * q.sx * q.cy;
        conv = U * U * q.sx * q.cx;
      } else if (i == 1) {
        u = -U * q.cx * q.sy;
        conv = U * U * q.sy * q.cy;
      }
      // The solver's buoyancy uses n minus its mean; the mean of n* is 1.
      return u + tau * conv + (n - 1.0) * params.phi_gradient[i];
    });
  }
  return out;
}

// ------------------------------------------------------------------ studies

std::vector<double> observed_orders(const std::vector<double>& parameters, const std::vector<double>& errors) {
  if (parameters.size() != errors.size()) throw InvalidArgument("observed_orders: size mismatch");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    out.push_back(std::log(errors[i] / errors[i + 1]) / std::log(parameters[i] / parameters[i + 1]));
  return out;
}

namespace {

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

}  // namespace

StudyResult run_uniform_study(const UniformStudySettings& s) {
  StudyResult r;
  r.name = "uniform";
  ConvergenceSeries series{"max relative c error", "dt", {}, {}, {}};

  SimParams params;
  params.alpha = s.alpha;
  params.tau = 0;
  params.rho = 1e-3;
  params.t_final = s.t_final;
  params.domain.dim = 3;
  params.domain.lengths = {16.0, 16.0, 16.0};
  params.domain.resolution = {8, 8, 8};

  for (double dt : s.time_steps) {
    params.dt_max = dt;
    FieldState init(params.domain);
    init.n.values().setConstant(s.n_bar);
    init.c.values().setConstant(s.c_bar);
    double worst = 0.0;
    auto observe = [&](const FieldState& st, double) {
      const double exact = uniform_state_ode(s.n_bar, s.c_bar, s.model, st.t);
      const double err = ((st.c.values() - exact).abs() / exact).maxCoeff();
      worst = std::max(worst, err);
    };
    RunSchedule sched{{0.0, s.t_final}, {}, {}};
    const RunResult res = run(params, s.model, init, sched, observe);
    const double expected_steps = std::ceil(s.t_final / dt - 1e-9);
    if (static_cast<double>(res.steps) > expected_steps + 1)
      r.notes.push_back("dt = " + fmt("%g", dt) + " was reduced by the stability limit");
    series.parameters.push_back(dt);
    series.errors.push_back(worst);
  }
  series.orders = observed_orders(series.parameters, series.errors);
  const double finest = series.errors.back();
  const bool accurate = finest <= s.tolerance;
  const bool ordered = std::all_of(series.orders.begin(), series.orders.end(), [&](double o) { return o >= s.min_order; });
  r.passed = accurate && ordered && !series.errors.empty();
  r.notes.push_back("finest error " + fmt("%.3e", finest) + " vs tolerance " + fmt("%.1e", s.tolerance));
  r.series.push_back(std::move(series));
  return r;
}

StudyResult run_barenblatt_study(const BarenblattStudySettings& s) {
  StudyResult r;
  r.name = "barenblatt";
  if (!(s.t_end > s.t_start && s.t_start > 0.0)) throw InvalidArgument("barenblatt study: need 0 < t_start < t_end");
  const Barenblatt profile(s.alpha, s.mass, 1);
  if (profile.support_radius(s.t_end) >= 0.5 * s.length)
    throw InvalidArgument("barenblatt study: support reaches the box edge before t_end");
  ConvergenceSeries series{"L1 error of n", "h", {}, {}, {}};

  // Uniform c with no consumption keeps grad c = 0, so chemotaxis is inert.
  ChiKappaModel model{1.0, 0.0, 0.0, 1.0};
  for (int N : s.resolutions) {
    SimParams params;
    params.alpha = s.alpha;
    params.tau = 0;
    params.rho = s.rho;
    params.t_final = s.t_end - s.t_start;
    params.domain.dim = 1;
    params.domain.lengths = {s.length, 1.0, 1.0};
    params.domain.resolution = {N, 1, 1};
    FieldState init(params.domain);
    init.n = sample(params.domain, [&](const auto& x) { return profile(x, s.t_start); });
    init.c.values().setConstant(1.0);
    RunSchedule sched{{0.0, params.t_final}, {}, {}};
    const RunResult res = run(params, model, init, sched);
    const ScalarField exact = sample(params.domain, [&](const auto& x) { return profile(x, s.t_end); });
    const double err = integrate(ScalarField(params.domain, (res.final_state.n.values() - exact.values()).abs()));
    series.parameters.push_back(params.domain.cell_size(0));
    series.errors.push_back(err);
  }
  series.orders = observed_orders(series.parameters, series.errors);
  r.passed = !series.errors.empty();
  for (std::size_t i = 0; i + 1 < series.errors.size(); ++i) r.passed = r.passed && series.errors[i + 1] < series.errors[i];
  r.notes.push_back("support radius at t_end " + fmt("%.4f", profile.support_radius(s.t_end)));
  r.series.push_back(std::move(series));
  return r;
}

ManufacturedStudySettings default_manufactured_settings() {
  ManufacturedStudySettings s;
  auto& p = s.problem.params;
  p.alpha = 0.5;
  p.tau = 1;
  p.rho = 0.01;
  p.phi_gradient = {0.0, 0.1, 0.0};
  // A small safety factor keeps the O(dt) error well below the spatial error.
  p.cfl_safety = 0.1;
  s.problem.model = ChiKappaModel{0.05, 0.02, 1.0, 1.0};
  return s;
}

StudyResult run_manufactured_study(const ManufacturedStudySettings& s) {
  StudyResult r;
  r.name = "manufactured";
  ConvergenceSeries sn{"L2 error of n", "h", {}, {}, {}};
  ConvergenceSeries sc{"L2 error of c", "h", {}, {}, {}};
  ConvergenceSeries su{"L2 error of u", "h", {}, {}, {}};
  for (int N : s.resolutions) {
    SimParams params = s.problem.params;
    params.t_final = s.t_final;
    params.domain.dim = s.dim;
    params.domain.mode = BoundaryMode::periodic;
    params.domain.lengths = {2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 2.0 * std::numbers::pi};
    params.domain.resolution = {N, N, s.dim == 3 ? N : 1};
    params.validate();
    const Integrator integrator(params, s.problem.model);
    FieldState state = s.problem.exact(params.domain, 0.0);
    while (state.t < s.t_final) {
      const double remaining = s.t_final - state.t;
      double dt = std::min({integrator.stable_dt(state), params.dt_max, remaining});
      const Sources src = s.problem.forcing(params.domain, state.t);
      const bool last = dt >= remaining;
      state = integrator.step(state, dt, &src);
      if (last) state.t = s.t_final;
    }
    const FieldState exact = s.problem.exact(params.domain, s.t_final);
    const double h = params.domain.cell_size(0);
    sn.parameters.push_back(h);
    sc.parameters.push_back(h);
    su.parameters.push_back(h);
    sn.errors.push_back(lp_norm(ScalarField(params.domain, state.n.values() - exact.n.values()), 2.0));
    sc.errors.push_back(lp_norm(ScalarField(params.domain, state.c.values() - exact.c.values()), 2.0));
    VecField du(params.domain);
    for (int a = 0; a < s.dim; ++a) du[a].values() = state.u[a].values() - exact.u[a].values();
    su.errors.push_back(std::sqrt(l2_norm_squared(du)));
  }
  r.passed = s.resolutions.size() >= 2;
  for (auto* series : {&sn, &sc, &su}) {
    series->orders = observed_orders(series->parameters, series->errors);
    if (!series->orders.empty()) r.passed = r.passed && series->orders.back() >= s.min_order;
    r.series.push_back(*series);
  }
  r.notes.push_back("required order at the finest pair " + fmt("%.2f", s.min_order));
  return r;
}

std::string format_study(const StudyResult& r) {
  std::string out = "study " + r.name + ": " + (r.passed ? "PASS" : "FAIL") + "\n";
  for (const auto& s : r.series) {
    out += "  " + s.label + "\n";
    for (std::size_t i = 0; i < s.errors.size(); ++i) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "    %s = %-12.6g error = %.6e", s.parameter_name.c_str(), s.parameters[i], s.errors[i]);
      out += buf;
      if (i > 0) out += fmt("  order = %.3f", s.orders[i - 1]);
      out += "\n";
    }
  }
  for (const auto& n : r.notes) out += "  note: " + n + "\n";
  return out;
}

}  // namespace chemoflux::oracle
