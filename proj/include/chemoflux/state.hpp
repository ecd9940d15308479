#pragma once

#include "chemoflux/grid.hpp"

namespace chemoflux {

/// Discrete (n, c, u, p) at time t.
struct FieldState {
  double t = 0.0;
  ScalarField n;
  ScalarField c;
  VecField u;
  ScalarField p;

  FieldState() = default;
  explicit FieldState(const DomainSpec& spec, double time = 0.0)
      : t(time), n(spec), c(spec), u(spec), p(spec) {}

  const DomainSpec& spec() const { return n.spec(); }
};

/// Explicit source terms added to the right-hand sides (manufactured solutions).
struct Sources {
  ScalarField n;
  ScalarField c;
  VecField u;
};

}  // namespace chemoflux
