#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "chemoflux/error.hpp"
#include "chemoflux/model.hpp"

namespace chemoflux {

/// How ghost cells beyond a neumann-mode wall are filled. Ignored in periodic mode.
///   mirror  : ghost = interior value (zero normal derivative; used for n, c, p)
///   no_slip : ghost = -interior value (field vanishes on the wall; used for u)
enum class BoundaryKind { mirror, no_slip };

/// Row-major index arithmetic for a DomainSpec; missing axes have extent 1.
struct Layout {
  std::array<Eigen::Index, 3> extent{1, 1, 1};
  std::array<Eigen::Index, 3> stride{0, 0, 0};
  std::array<double, 3> h{1.0, 1.0, 1.0};
  int dim = 1;
  bool periodic = true;

  explicit Layout(const DomainSpec& spec) : dim(spec.dim), periodic(spec.mode == BoundaryMode::periodic) {
    for (int a = 0; a < spec.dim; ++a) {
      extent[a] = spec.resolution[a];
      h[a] = spec.cell_size(a);
    }
    // Row-major; trailing unused axes have extent 1 so the last active axis is contiguous.
    stride[2] = 1;
    stride[1] = extent[2];
    stride[0] = extent[1] * extent[2];
  }

  Eigen::Index size() const { return extent[0] * extent[1] * extent[2]; }

  Eigen::Index index(Eigen::Index i, Eigen::Index j = 0, Eigen::Index k = 0) const {
    return i * stride[0] + j * stride[1] + k * stride[2];
  }

  /// Calls f(idx, coords) for every cell in storage order.
  template <typename F>
  void for_each(F&& f) const {
    std::array<Eigen::Index, 3> c{0, 0, 0};
    for (c[0] = 0; c[0] < extent[0]; ++c[0])
      for (c[1] = 0; c[1] < extent[1]; ++c[1])
        for (c[2] = 0; c[2] < extent[2]; ++c[2]) f(index(c[0], c[1], c[2]), c);
  }

  /// Neighbor along `axis` at offset +1/-1. Returns -1 when the step crosses a wall.
  Eigen::Index neighbor(Eigen::Index idx, const std::array<Eigen::Index, 3>& c, int axis,
                        int offset) const {
    const Eigen::Index n = extent[axis];
    Eigen::Index q = c[axis] + offset;
    if (q < 0 || q >= n) {
      if (!periodic) return -1;
      q = (q + n) % n;
    }
    return idx + (q - c[axis]) * stride[axis];
  }
};

template <typename Scalar>
class Field {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Field() = default;
  explicit Field(const DomainSpec& spec, Scalar fill = Scalar(0))
      : spec_(spec), values_(Array::Constant(spec.cell_count(), fill)) {}
  Field(const DomainSpec& spec, Array values) : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.cell_count())
      throw InvalidArgument("field value count does not match the grid");
  }

  const DomainSpec& spec() const { return spec_; }
  Layout layout() const { return Layout(spec_); }
  Eigen::Index size() const { return values_.size(); }

  Array& values() { return values_; }
  const Array& values() const { return values_; }
  Scalar& operator[](Eigen::Index i) { return values_[i]; }
  const Scalar& operator[](Eigen::Index i) const { return values_[i]; }

  bool all_finite() const { return values_.allFinite(); }
  Scalar min() const { return values_.minCoeff(); }
  Scalar max() const { return values_.maxCoeff(); }

 private:
  DomainSpec spec_;
  Array values_;
};

template <typename Scalar>
struct VectorField {
  std::vector<Field<Scalar>> components;

  VectorField() = default;
  explicit VectorField(const DomainSpec& spec, Scalar fill = Scalar(0))
      : components(spec.dim, Field<Scalar>(spec, fill)) {}

  int dim() const { return static_cast<int>(components.size()); }
  const DomainSpec& spec() const { return components.front().spec(); }
  Field<Scalar>& operator[](int a) { return components[a]; }
  const Field<Scalar>& operator[](int a) const { return components[a]; }

  bool all_finite() const {
    for (const auto& c : components)
      if (!c.all_finite()) return false;
    return true;
  }

  /// Pointwise Euclidean magnitude.
  Field<Scalar> magnitude() const {
    typename Field<Scalar>::Array sq = Field<Scalar>::Array::Zero(components.front().size());
    for (const auto& c : components) sq += c.values().square();
    return Field<Scalar>(spec(), sq.sqrt());
  }
};

using ScalarField = Field<double>;
using VecField = VectorField<double>;

namespace detail {

template <typename Scalar>
Scalar ghost(Scalar interior, BoundaryKind kind) {
  return kind == BoundaryKind::mirror ? interior : -interior;
}

template <typename Scalar>
Scalar neighbor_value(const Field<Scalar>& f, const Layout& lay, Eigen::Index idx,
                      const std::array<Eigen::Index, 3>& c, int axis, int offset,
                      BoundaryKind kind) {
  const Eigen::Index j = lay.neighbor(idx, c, axis, offset);
  return j < 0 ? ghost(f[idx], kind) : f[j];
}

// Neumaier-compensated sum; the mass monitor needs better than naive accumulation.
template <typename Scalar, typename Derived>
Scalar compensated_sum(const Eigen::ArrayBase<Derived>& values) {
  Scalar sum = 0, comp = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const Scalar v = values[i];
    const Scalar t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace detail

/// Second-order central gradient at cell centers.
template <typename Scalar>
VectorField<Scalar> gradient(const Field<Scalar>& f, BoundaryKind kind = BoundaryKind::mirror) {
  const Layout lay = f.layout();
  VectorField<Scalar> g(f.spec());
  for (int a = 0; a < lay.dim; ++a) {
    const Scalar inv2h = Scalar(1) / (Scalar(2) * lay.h[a]);
    auto& out = g[a];
#pragma omp parallel for schedule(static)
    for (Eigen::Index i0 = 0; i0 < lay.extent[0]; ++i0) {
      std::array<Eigen::Index, 3> c{i0, 0, 0};
      for (c[1] = 0; c[1] < lay.extent[1]; ++c[1])
        for (c[2] = 0; c[2] < lay.extent[2]; ++c[2]) {
          const Eigen::Index idx = lay.index(c[0], c[1], c[2]);
          out[idx] = (detail::neighbor_value(f, lay, idx, c, a, +1, kind) -
                      detail::neighbor_value(f, lay, idx, c, a, -1, kind)) *
                     inv2h;
        }
    }
  }
  return g;
}

/// Central divergence, the negative adjoint of `gradient` in periodic mode.
/// In neumann mode the default treats v as vanishing on the walls (no-slip).
template <typename Scalar>
Field<Scalar> divergence(const VectorField<Scalar>& v, BoundaryKind kind = BoundaryKind::no_slip) {
  const Layout lay = v[0].layout();
  Field<Scalar> out(v.spec());
  for (int a = 0; a < lay.dim; ++a) {
    const Scalar inv2h = Scalar(1) / (Scalar(2) * lay.h[a]);
    const auto& comp = v[a];
#pragma omp parallel for schedule(static)
    for (Eigen::Index i0 = 0; i0 < lay.extent[0]; ++i0) {
      std::array<Eigen::Index, 3> c{i0, 0, 0};
      for (c[1] = 0; c[1] < lay.extent[1]; ++c[1])
        for (c[2] = 0; c[2] < lay.extent[2]; ++c[2]) {
          const Eigen::Index idx = lay.index(c[0], c[1], c[2]);
          out[idx] += (detail::neighbor_value(comp, lay, idx, c, a, +1, kind) -
                       detail::neighbor_value(comp, lay, idx, c, a, -1, kind)) *
                      inv2h;
        }
    }
  }
  return out;
}

/// Compact (2*dim+1)-point Laplacian.
template <typename Scalar>
Field<Scalar> laplacian(const Field<Scalar>& f, BoundaryKind kind = BoundaryKind::mirror) {
  const Layout lay = f.layout();
  Field<Scalar> out(f.spec());
  for (int a = 0; a < lay.dim; ++a) {
    const Scalar inv_h2 = Scalar(1) / (lay.h[a] * lay.h[a]);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i0 = 0; i0 < lay.extent[0]; ++i0) {
      std::array<Eigen::Index, 3> c{i0, 0, 0};
      for (c[1] = 0; c[1] < lay.extent[1]; ++c[1])
        for (c[2] = 0; c[2] < lay.extent[2]; ++c[2]) {
          const Eigen::Index idx = lay.index(c[0], c[1], c[2]);
          out[idx] += (detail::neighbor_value(f, lay, idx, c, a, +1, kind) +
                       detail::neighbor_value(f, lay, idx, c, a, -1, kind) - Scalar(2) * f[idx]) *
                      inv_h2;
        }
    }
  }
  return out;
}

/// Forward difference onto the +side face of each cell: component a at cell i
/// holds (f[i+1] - f[i]) / h, i.e. the gradient at face i+1/2. In neumann mode
/// the wall face carries zero (no flux).
template <typename Scalar>
VectorField<Scalar> face_gradient(const Field<Scalar>& f) {
  const Layout lay = f.layout();
  VectorField<Scalar> g(f.spec());
  for (int a = 0; a < lay.dim; ++a) {
    const Scalar inv_h = Scalar(1) / lay.h[a];
    lay.for_each([&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
      const Eigen::Index j = lay.neighbor(idx, c, a, +1);
      g[a][idx] = j < 0 ? Scalar(0) : (f[j] - f[idx]) * inv_h;
    });
  }
  return g;
}

/// Backward difference of face values stored as in `face_gradient`. Wall faces
/// are treated as zero-flux in neumann mode.
template <typename Scalar>
Field<Scalar> face_divergence(const VectorField<Scalar>& g) {
  const Layout lay = g[0].layout();
  Field<Scalar> out(g.spec());
  for (int a = 0; a < lay.dim; ++a) {
    const Scalar inv_h = Scalar(1) / lay.h[a];
    lay.for_each([&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
      const Eigen::Index up = lay.neighbor(idx, c, a, +1);
      const Eigen::Index dn = lay.neighbor(idx, c, a, -1);
      const Scalar right = up < 0 ? Scalar(0) : g[a][idx];
      const Scalar left = dn < 0 ? Scalar(0) : g[a][dn];
      out[idx] += (right - left) * inv_h;
    });
  }
  return out;
}

/// Midpoint quadrature, compensated summation.
template <typename Scalar>
Scalar integrate(const Field<Scalar>& f) {
  return detail::compensated_sum<Scalar>(f.values()) * Scalar(f.spec().cell_volume());
}

/// L^p norm with cell-volume weights; p = infinity returns max |f|.
template <typename Scalar>
Scalar lp_norm(const Field<Scalar>& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.values().abs().maxCoeff();
  if (p == 1.0) return integrate(Field<Scalar>(f.spec(), f.values().abs()));
  if (p == 2.0) return std::sqrt(integrate(Field<Scalar>(f.spec(), f.values().square())));
  const Scalar s = integrate(Field<Scalar>(f.spec(), f.values().abs().pow(Scalar(p))));
  return std::pow(s, Scalar(1.0 / p));
}

/// Sum of squared L^2 norms of the components.
template <typename Scalar>
Scalar l2_norm_squared(const VectorField<Scalar>& v) {
  Scalar total = 0;
  for (const auto& c : v.components) total += integrate(Field<Scalar>(c.spec(), c.values().square()));
  return total;
}

/// Cell-center coordinate along an axis. Periodic boxes are centered at the
/// origin; neumann boxes span [0, L].
inline double cell_center(const DomainSpec& spec, int axis, Eigen::Index i) {
  const double h = spec.cell_size(axis);
  const double origin = spec.mode == BoundaryMode::periodic ? -0.5 * spec.lengths[axis] : 0.0;
  return origin + (static_cast<double>(i) + 0.5) * h;
}

/// Samples f(x, y, z) at cell centers (unused coordinates are 0).
template <typename F>
ScalarField sample(const DomainSpec& spec, F&& f) {
  ScalarField out(spec);
  const Layout lay(spec);
  lay.for_each([&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < spec.dim; ++a) x[a] = cell_center(spec, a, c[a]);
    out[idx] = f(x);
  });
  return out;
}

}  // namespace chemoflux
