#include "chemoflux/spectral.hpp"

#include <cmath>
#include <numbers>

namespace chemoflux {

PeriodicSpectral::PeriodicSpectral(const DomainSpec& spec) : spec_(spec), layout_(spec) {
  if (spec.mode != BoundaryMode::periodic)
    throw UnsupportedMode("spectral operators require periodic mode");
  for (int a = 0; a < 3; ++a) {
    const Eigen::Index n = layout_.extent[a];
    lap_symbol_[a].assign(n, 0.0);
    grad_symbol_[a].assign(n, 0.0);
    if (a >= spec.dim) continue;
    const double h = layout_.h[a];
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index ks = (2 * k <= n) ? k : k - n;
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(ks) / static_cast<double>(n);
      const double s = std::sin(0.5 * theta);
      lap_symbol_[a][k] = -4.0 * s * s / (h * h);
      // sin(theta) is exactly zero at k = 0 and at the Nyquist mode.
      grad_symbol_[a][k] = (ks == 0 || 2 * ks == n || 2 * ks == -n) ? 0.0 : std::sin(theta) / h;
    }
  }
}

void PeriodicSpectral::transform(Spectrum& data, bool forward) const {
  Spectrum line, out;
  for (int a = 0; a < spec_.dim; ++a) {
    const Eigen::Index n = layout_.extent[a];
    const Eigen::Index stride = layout_.stride[a];
    line.resize(n);
    std::array<Eigen::Index, 3> c{0, 0, 0};
    std::array<Eigen::Index, 3> ext = layout_.extent;
    ext[a] = 1;
    for (c[0] = 0; c[0] < ext[0]; ++c[0])
      for (c[1] = 0; c[1] < ext[1]; ++c[1])
        for (c[2] = 0; c[2] < ext[2]; ++c[2]) {
          const Eigen::Index base = layout_.index(c[0], c[1], c[2]);
          for (Eigen::Index k = 0; k < n; ++k) line[k] = data[base + k * stride];
          if (forward)
            fft_.fwd(out, line);
          else
            fft_.inv(out, line);
          for (Eigen::Index k = 0; k < n; ++k) data[base + k * stride] = out[k];
        }
  }
}

PeriodicSpectral::Spectrum PeriodicSpectral::forward(const ScalarField& f) const {
  Spectrum s(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) s[i] = Complex(f[i], 0.0);
  transform(s, true);
  return s;
}

ScalarField PeriodicSpectral::inverse(Spectrum s) const {
  transform(s, false);
  ScalarField f(spec_);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = s[i].real();
  return f;
}

ScalarField PeriodicSpectral::solve_implicit_diffusion(const ScalarField& f, double dt) const {
  // Constant fields are fixed points; skip the transform so they stay bit-exact.
  if ((f.values() == f[0]).all()) return f;
  Spectrum s = forward(f);
  layout_.for_each([&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
    const double sym = lap_symbol_[0][c[0]] + lap_symbol_[1][c[1]] + lap_symbol_[2][c[2]];
    s[idx] /= (1.0 - dt * sym);
  });
  return inverse(std::move(s));
}

std::pair<VecField, ScalarField> PeriodicSpectral::project(const VecField& v) const {
  return project_impl(v, 0.0);
}

std::pair<VecField, ScalarField> PeriodicSpectral::diffuse_and_project(const VecField& v,
                                                                       double dt) const {
  return project_impl(v, dt);
}

std::pair<VecField, ScalarField> PeriodicSpectral::project_impl(const VecField& v, double dt) const {
  const int dim = spec_.dim;
  bool all_zero = true;
  for (int a = 0; a < dim; ++a) all_zero = all_zero && (v[a].values() == 0.0).all();
  if (all_zero) return {v, ScalarField(spec_)};

  std::vector<Spectrum> vh(dim);
  for (int a = 0; a < dim; ++a) vh[a] = forward(v[a]);
  Spectrum ph(v[0].size(), Complex(0.0, 0.0));
  const Complex I(0.0, 1.0);

  layout_.for_each([&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
    if (dt > 0.0) {
      const double sym = lap_symbol_[0][c[0]] + lap_symbol_[1][c[1]] + lap_symbol_[2][c[2]];
      for (int a = 0; a < dim; ++a) vh[a][idx] /= (1.0 - dt * sym);
    }
    double s2 = 0.0;
    Complex div(0.0, 0.0);
    for (int a = 0; a < dim; ++a) {
      const double s = grad_symbol_[a][c[a]];
      s2 += s * s;
      div += I * s * vh[a][idx];
    }
    if (s2 == 0.0) return;
    const Complex p = -div / s2;
    ph[idx] = p;
    for (int a = 0; a < dim; ++a) vh[a][idx] -= I * grad_symbol_[a][c[a]] * p;
  });

  VecField u(spec_);
  for (int a = 0; a < dim; ++a) u[a] = inverse(std::move(vh[a]));
  return {std::move(u), inverse(std::move(ph))};
}

}  // namespace chemoflux
