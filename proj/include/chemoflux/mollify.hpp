#pragma once

#include "chemoflux/grid.hpp"

namespace chemoflux {

/// Convolution with the C-infinity bump exp(-1/(1-|x/rho|^2)), sampled at cell
/// centers and renormalized to unit discrete mass. In neumann mode the kernel
/// is renormalized per output cell over the part of its support inside the box.
/// Kernels narrower than two cells (rho < 2h) reduce to the identity.
ScalarField mollify(const ScalarField& f, double rho);

}  // namespace chemoflux
