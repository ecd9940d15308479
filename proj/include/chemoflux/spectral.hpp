#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "chemoflux/grid.hpp"

namespace chemoflux {

/// FFT-diagonalized operators on a periodic box. Every symbol is the symbol of
/// the corresponding finite-difference operator in grid.hpp, so results agree
/// with the stencils to round-off rather than to truncation error.
class PeriodicSpectral {
 public:
  using Complex = std::complex<double>;
  using Spectrum = std::vector<Complex>;

  explicit PeriodicSpectral(const DomainSpec& spec);

  Spectrum forward(const ScalarField& f) const;
  ScalarField inverse(Spectrum s) const;

  /// Solves (I - dt * laplacian) x = f with the compact Laplacian.
  ScalarField solve_implicit_diffusion(const ScalarField& f, double dt) const;

  /// Leray decomposition v = u + gradient(p) with divergence(u) = 0 for the
  /// central operators; p has zero mean.
  std::pair<VecField, ScalarField> project(const VecField& v) const;

  /// Implicit viscous diffusion of every component followed by `project`,
  /// fused so each component is transformed once.
  std::pair<VecField, ScalarField> diffuse_and_project(const VecField& v, double dt) const;

 private:
  void transform(Spectrum& data, bool forward) const;
  std::pair<VecField, ScalarField> project_impl(const VecField& v, double dt) const;

  DomainSpec spec_;
  Layout layout_;
  // Per axis: compact Laplacian symbol and central-gradient symbol sin(theta)/h.
  std::array<std::vector<double>, 3> lap_symbol_;
  std::array<std::vector<double>, 3> grad_symbol_;
  mutable Eigen::FFT<double> fft_;
};

}  // namespace chemoflux
