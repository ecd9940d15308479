#include "chemoflux/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "chemoflux/mollify.hpp"
#include "chemoflux/snapshot.hpp"

namespace chemoflux {
namespace {

using Array = ScalarField::Array;

constexpr double kNegativeDensityTolerance = 1e-13;

template <typename F>
void for_each_cell_parallel(const Layout& lay, F&& f) {
#pragma omp parallel for schedule(static)
  for (Eigen::Index i0 = 0; i0 < lay.extent[0]; ++i0) {
    std::array<Eigen::Index, 3> c{i0, 0, 0};
    for (c[1] = 0; c[1] < lay.extent[1]; ++c[1])
      for (c[2] = 0; c[2] < lay.extent[2]; ++c[2]) f(lay.index(c[0], c[1], c[2]), c);
  }
}

// Face velocity at face i+1/2 along `axis`: chi(c_face) (c_{i+1} - c_i)/h plus
// the averaged fluid velocity. Zero on walls.
double face_velocity(const FieldState& s, const ChiKappaModel& model, const Layout& lay,
                     Eigen::Index idx, Eigen::Index up, int axis) {
  const double c0 = s.c[idx], c1 = s.c[up];
  const double cf = std::max(0.5 * (c0 + c1), 0.0);
  return model.chi(cf) * (c1 - c0) / lay.h[axis] + 0.5 * (s.u[axis][idx] + s.u[axis][up]);
}

// sum_a v_a * D_a f with first-order upwind differences; ghosts per `kind`.
Array upwind_transport(const ScalarField& f, const VecField& v, const Layout& lay, BoundaryKind kind) {
  Array out = Array::Zero(f.size());
  for_each_cell_parallel(lay, [&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
    double acc = 0.0;
    for (int a = 0; a < lay.dim; ++a) {
      const double va = v[a][idx];
      if (va > 0.0)
        acc += va * (f[idx] - detail::neighbor_value(f, lay, idx, c, a, -1, kind)) / lay.h[a];
      else if (va < 0.0)
        acc += va * (detail::neighbor_value(f, lay, idx, c, a, +1, kind) - f[idx]) / lay.h[a];
    }
    out[idx] = acc;
  });
  return out;
}

}  // namespace

double projection_tolerance(BoundaryMode mode) {
  return mode == BoundaryMode::periodic ? 1e-10 : 1e-8;
}

Integrator::Integrator(SimParams params, ChiKappaModel model)
    : params_(std::move(params)), model_(std::move(model)) {
  params_.validate();
  model_.validate();
  if (params_.domain.mode == BoundaryMode::periodic)
    spectral_ = std::make_shared<const PeriodicSpectral>(params_.domain);
  else
    neumann_ = std::make_shared<const NeumannOperators>(params_.domain);
}

double Integrator::stable_dt(const FieldState& s) const {
  const double max_n = s.n.max();
  if (!std::isfinite(max_n) || !s.n.all_finite()) throw DegenerateState("stable_dt: n is not finite");
  if (!s.u.all_finite()) throw DegenerateState("stable_dt: max |u| is not finite");
  if (!s.c.all_finite()) throw DegenerateState("stable_dt: c is not finite");

  const DomainSpec& spec = s.spec();
  const Layout lay(spec);
  const double h = spec.min_cell_size();
  const double a = params_.alpha;
  const double dim = spec.dim;
  const double diffusion = h * h / (2.0 * dim * (1.0 + a) * std::pow(std::max(max_n, 0.0) + params_.rho, a));

  double w_max = 0.0;
  lay.for_each([&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
    for (int ax = 0; ax < lay.dim; ++ax) {
      w_max = std::max(w_max, std::abs(s.u[ax][idx]));
      const Eigen::Index up = lay.neighbor(idx, c, ax, +1);
      if (up >= 0) w_max = std::max(w_max, std::abs(face_velocity(s, model_, lay, idx, up, ax)));
    }
  });
  const double transport = w_max > 0.0 ? h / (2.0 * dim * w_max) : std::numeric_limits<double>::infinity();
  return params_.cfl_safety * std::min(diffusion, transport);
}

ScalarField Integrator::implicit_diffusion(const ScalarField& f, double dt, BoundaryKind kind) const {
  if (spectral_) return spectral_->solve_implicit_diffusion(f, dt);
  return neumann_->solve_implicit_diffusion(f, dt, kind);
}

std::pair<VecField, ScalarField> Integrator::project(const VecField& v) const {
  if (spectral_) return spectral_->project(v);
  return neumann_->project(v);
}

FieldState Integrator::step(const FieldState& s, double dt, const Sources* sources) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("step: dt must be positive and finite");
  const DomainSpec& spec = s.spec();
  if (!(spec == params_.domain)) throw InvalidArgument("step: state grid differs from the integrator grid");
  const Layout lay(spec);
  const Eigen::Index N = spec.cell_count();
  const int dim = spec.dim;
  FieldState out(spec, s.t + dt);

  // Density: flux form, J = -grad F + w n with F = (n + rho)^{1+alpha}.
  {
    const Array F = (s.n.values() + params_.rho).max(0.0).pow(1.0 + params_.alpha);
    Array dndt = Array::Zero(N);
    Array flux(N);
    for (int a = 0; a < dim; ++a) {
      const double inv_h = 1.0 / lay.h[a];
      for_each_cell_parallel(lay, [&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
        const Eigen::Index up = lay.neighbor(idx, c, a, +1);
        if (up < 0) {
          flux[idx] = 0.0;
          return;
        }
        const double w = face_velocity(s, model_, lay, idx, up, a);
        const double upwind = w > 0.0 ? w * s.n[idx] : w * s.n[up];
        flux[idx] = -(F[up] - F[idx]) * inv_h + upwind;
      });
      for_each_cell_parallel(lay, [&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
        const Eigen::Index up = lay.neighbor(idx, c, a, +1);
        const Eigen::Index dn = lay.neighbor(idx, c, a, -1);
        const double right = up < 0 ? 0.0 : flux[idx];
        const double left = dn < 0 ? 0.0 : flux[dn];
        dndt[idx] -= (right - left) * inv_h;
      });
    }
    if (sources) dndt += sources->n.values();
    out.n.values() = s.n.values() + dt * dndt;
  }

  // Oxygen: upwind advection, implicit consumption factor, implicit diffusion.
  {
    Array c1 = s.c.values() - dt * upwind_transport(s.c, s.u, lay, BoundaryKind::mirror);
    for (Eigen::Index i = 0; i < N; ++i) {
      const double ci = std::max(c1[i], 0.0);
      c1[i] = ci / (1.0 + dt * std::max(s.n[i], 0.0) * model_.kappa_over_c(ci));
    }
    if (sources) c1 += dt * sources->c.values();
    out.c = implicit_diffusion(ScalarField(spec, std::move(c1)), dt, BoundaryKind::mirror);
  }

  // Fluid: buoyancy forcing, optional convection, viscous diffusion, projection.
  {
    // In periodic mode the mean of n grad(phi) is the gradient of a linear
    // potential in whole space; it is balanced by pressure, not by a mean flow.
    const double n_mean = spectral_ ? integrate(s.n) / spec.volume() : 0.0;
    VecField star(spec);
    for (int i = 0; i < dim; ++i) {
      Array v = s.u[i].values() - dt * params_.phi_gradient[i] * (s.n.values() - n_mean);
      if (params_.tau == 1) v -= dt * upwind_transport(s.u[i], s.u, lay, BoundaryKind::no_slip);
      if (sources) v += dt * sources->u[i].values();
      star[i].values() = std::move(v);
    }
    std::pair<VecField, ScalarField> projected;
    if (spectral_) {
      projected = spectral_->diffuse_and_project(star, dt);
    } else {
      // Projecting before the no-slip solve keeps pure-gradient forcing from
      // leaking into the wall layer of the diffused field.
      auto [solenoidal, p_pre] = neumann_->project(star);
      star = std::move(solenoidal);
      for (int i = 0; i < dim; ++i) star[i] = neumann_->solve_implicit_diffusion(star[i], dt, BoundaryKind::no_slip);
      projected = neumann_->project(star);
      projected.second.values() += p_pre.values();
    }
    out.u = std::move(projected.first);
    out.p = ScalarField(spec, projected.second.values() / dt);
  }

  if (!out.n.all_finite() || !out.c.all_finite() || !out.u.all_finite())
    throw InstabilityError("step produced non-finite values", out.t);
  if (out.n.min() < -kNegativeDensityTolerance)
    throw InstabilityError("step produced negative density (min n = " + std::to_string(out.n.min()) + ")",
                           out.t);
  return out;
}

double stable_dt(const FieldState& state, const SimParams& params, const ChiKappaModel& model) {
  SimParams p = params;
  p.domain = state.spec();
  return Integrator(p, model).stable_dt(state);
}

FieldState step(const FieldState& state, const SimParams& params, const ChiKappaModel& model, double dt) {
  SimParams p = params;
  p.domain = state.spec();
  return Integrator(p, model).step(state, dt);
}

std::pair<VecField, ScalarField> project(const VecField& v) {
  if (v.spec().mode == BoundaryMode::periodic) return PeriodicSpectral(v.spec()).project(v);
  return NeumannOperators(v.spec()).project(v);
}

FieldState prepare_initial_state(const FieldState& raw, const Integrator& integrator) {
  const double rho = integrator.params().rho;
  FieldState s(raw.spec(), 0.0);
  s.n = mollify(raw.n, rho);
  s.c = mollify(raw.c, rho);
  VecField u(raw.spec());
  for (int a = 0; a < u.dim(); ++a) u[a] = mollify(raw.u[a], rho);
  auto [proj, p] = integrator.project(u);
  s.u = std::move(proj);
  s.p = ScalarField(raw.spec());
  return s;
}

std::vector<double> evenly_spaced_times(double t_final, int count) {
  if (count < 1) throw InvalidArgument("evenly_spaced_times: count must be >= 1");
  std::vector<double> out;
  if (count == 1 || t_final == 0.0) return {0.0};
  for (int k = 0; k < count; ++k)
    out.push_back(k == count - 1 ? t_final : t_final * static_cast<double>(k) / (count - 1));
  return out;
}

RunResult run(const SimParams& params, const ChiKappaModel& model, const FieldState& initial,
              const RunSchedule& schedule, const StepObserver& observer) {
  Integrator integrator(params, model);
  if (!(initial.spec() == params.domain)) throw InvalidArgument("run: initial state grid differs from params.domain");
  const double T = params.t_final;
  for (double t : schedule.sample_times)
    if (!(t >= 0.0 && t <= T)) throw InvalidArgument("run: sample time outside [0, t_final]");
  for (double t : schedule.snapshot_times)
    if (!(t >= 0.0 && t <= T)) throw InvalidArgument("run: snapshot time outside [0, t_final]");

  const std::set<double> samples(schedule.sample_times.begin(), schedule.sample_times.end());
  std::set<double> snaps;
  if (!schedule.snapshot_dir.empty()) snaps.insert(schedule.snapshot_times.begin(), schedule.snapshot_times.end());
  std::set<double> events = samples;
  events.insert(snaps.begin(), snaps.end());
  events.insert(T);

  RunResult result;
  FieldState state = prepare_initial_state(initial, integrator);
  result.c_max = std::max(state.c.max(), 0.0);
  result.assumption = classify_assumption(model, params, result.c_max);
  result.assumption_warning = !result.assumption.any();
  result.max_div_residual =
      lp_norm(divergence(state.u, BoundaryKind::no_slip), std::numeric_limits<double>::infinity());

  int snapshot_index = 0;
  auto handle_events = [&]() {
    if (samples.count(state.t)) {
      const DiagnosticsRecord* prev = result.series.empty() ? nullptr : &result.series.back();
      result.series.push_back(compute_record(state, params, prev));
    }
    if (snaps.count(state.t)) {
      std::filesystem::create_directories(schedule.snapshot_dir);
      char tag[32];
      std::snprintf(tag, sizeof tag, "_%04d", snapshot_index++);
      auto dump = [&](const ScalarField& f, const std::string& name) {
        const auto stem = schedule.snapshot_dir / (name + tag);
        write_snapshot(stem, f, name, state.t);
        result.snapshots.push_back(stem);
      };
      dump(state.n, "n");
      dump(state.c, "c");
      static const char* names[] = {"u_x", "u_y", "u_z"};
      for (int a = 0; a < state.u.dim(); ++a) dump(state.u[a], names[a]);
      dump(state.p, "p");
    }
  };

  handle_events();
  auto next = events.upper_bound(state.t);
  while (next != events.end()) {
    const double remaining = *next - state.t;
    const double dt = std::min({integrator.stable_dt(state), params.dt_max, remaining});
    const bool lands = dt == remaining;
    state = integrator.step(state, dt);
    if (lands) state.t = *next;
    ++result.steps;
    result.max_div_residual = std::max(
        result.max_div_residual,
        lp_norm(divergence(state.u, BoundaryKind::no_slip), std::numeric_limits<double>::infinity()));
    if (observer) observer(state, dt);
    if (lands) {
      handle_events();
      ++next;
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace chemoflux
