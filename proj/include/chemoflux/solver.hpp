#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "chemoflux/diagnostics.hpp"
#include "chemoflux/model.hpp"
#include "chemoflux/neumann.hpp"
#include "chemoflux/spectral.hpp"
#include "chemoflux/state.hpp"

namespace chemoflux {

/// Divergence tolerance that `project` guarantees for each boundary mode.
double projection_tolerance(BoundaryMode mode);

/// Explicit Euler integrator for the regularized system. Holds the factorized
/// or transformed operators for one grid so repeated steps do not rebuild them.
class Integrator {
 public:
  Integrator(SimParams params, ChiKappaModel model);

  const SimParams& params() const { return params_; }
  const ChiKappaModel& model() const { return model_; }

  /// cfl_safety * min(diffusion limit, transport limit). The oxygen diffusion
  /// and consumption terms are implicit and impose no limit.
  double stable_dt(const FieldState& state) const;

  /// Advances (n, c, u, p) by dt. `sources`, when given, is added to each
  /// right-hand side at the explicit stage.
  FieldState step(const FieldState& state, double dt, const Sources* sources = nullptr) const;

  /// (u, p) with v = u + grad p, div u = 0 and zero-mean p.
  std::pair<VecField, ScalarField> project(const VecField& v) const;

  /// (I - dt laplacian)^{-1} f with the ghost convention `kind`.
  ScalarField implicit_diffusion(const ScalarField& f, double dt, BoundaryKind kind) const;

 private:
  SimParams params_;
  ChiKappaModel model_;
  std::shared_ptr<const PeriodicSpectral> spectral_;
  std::shared_ptr<const NeumannOperators> neumann_;
};

double stable_dt(const FieldState& state, const SimParams& params, const ChiKappaModel& model);
FieldState step(const FieldState& state, const SimParams& params, const ChiKappaModel& model, double dt);
std::pair<VecField, ScalarField> project(const VecField& v);

/// Mollifies n, c and each velocity component with params.rho, projects u and
/// resets the clock to 0.
FieldState prepare_initial_state(const FieldState& raw, const Integrator& integrator);

/// When to record diagnostics and where to dump fields.
struct RunSchedule {
  std::vector<double> sample_times;    // each in [0, t_final]
  std::vector<double> snapshot_times;  // each in [0, t_final]
  std::filesystem::path snapshot_dir;  // empty: snapshots disabled
};

/// `count` evenly spaced times from 0 to t_final inclusive.
std::vector<double> evenly_spaced_times(double t_final, int count);

struct RunResult {
  std::vector<DiagnosticsRecord> series;
  FieldState final_state;
  AssumptionCase assumption;
  double c_max = 0.0;
  bool assumption_warning = false;  // no clause of either assumption holds
  std::size_t steps = 0;
  double max_div_residual = 0.0;  // over every accepted step
  std::vector<std::filesystem::path> snapshots;
};

/// Called after every accepted step with the new state and the step size used.
using StepObserver = std::function<void(const FieldState&, double)>;

/// Mollifies `initial`, integrates to params.t_final with adaptive steps that
/// land exactly on every sample and snapshot time, and collects diagnostics.
RunResult run(const SimParams& params, const ChiKappaModel& model, const FieldState& initial,
              const RunSchedule& schedule, const StepObserver& observer = {});

}  // namespace chemoflux
