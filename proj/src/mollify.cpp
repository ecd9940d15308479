#include "chemoflux/mollify.hpp"

#include <cmath>
#include <vector>

namespace chemoflux {
namespace {

struct KernelTap {
  std::array<int, 3> offset;
  double weight;
};

std::vector<KernelTap> bump_taps(const DomainSpec& spec, double rho) {
  std::array<int, 3> reach{0, 0, 0};
  for (int a = 0; a < spec.dim; ++a)
    reach[a] = static_cast<int>(std::floor(rho / spec.cell_size(a)));

  std::vector<KernelTap> taps;
  double total = 0.0;
  for (int i = -reach[0]; i <= reach[0]; ++i)
    for (int j = -reach[1]; j <= reach[1]; ++j)
      for (int k = -reach[2]; k <= reach[2]; ++k) {
        const std::array<int, 3> off{i, j, k};
        double r2 = 0.0;
        for (int a = 0; a < spec.dim; ++a) {
          const double x = off[a] * spec.cell_size(a) / rho;
          r2 += x * x;
        }
        if (r2 >= 1.0) continue;
        const double w = std::exp(-1.0 / (1.0 - r2));
        taps.push_back({off, w});
        total += w;
      }
  for (auto& t : taps) t.weight /= total;
  return taps;
}

}  // namespace

ScalarField mollify(const ScalarField& f, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("mollify: rho must lie in (0,1)");
  const DomainSpec& spec = f.spec();
  if (rho < 2.0 * spec.max_cell_size()) return f;

  const auto taps = bump_taps(spec, rho);
  const Layout lay(spec);
  const bool periodic = spec.mode == BoundaryMode::periodic;
  ScalarField out(spec);

#pragma omp parallel for schedule(static)
  for (Eigen::Index i0 = 0; i0 < lay.extent[0]; ++i0) {
    std::array<Eigen::Index, 3> c{i0, 0, 0};
    for (c[1] = 0; c[1] < lay.extent[1]; ++c[1])
      for (c[2] = 0; c[2] < lay.extent[2]; ++c[2]) {
        double acc = 0.0, wsum = 0.0;
        for (const auto& t : taps) {
          std::array<Eigen::Index, 3> q{};
          bool inside = true;
          for (int a = 0; a < 3; ++a) {
            q[a] = c[a] - t.offset[a];
            const Eigen::Index n = lay.extent[a];
            if (q[a] < 0 || q[a] >= n) {
              if (periodic) {
                q[a] = ((q[a] % n) + n) % n;
              } else {
                inside = false;
                break;
              }
            }
          }
          if (!inside) continue;
          acc += t.weight * f[lay.index(q[0], q[1], q[2])];
          wsum += t.weight;
        }
        out[lay.index(c[0], c[1], c[2])] = periodic ? acc : acc / wsum;
      }
  }
  return out;
}

}  // namespace chemoflux
