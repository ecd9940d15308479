#include "chemoflux/neumann.hpp"

#include <vector>

#include <Eigen/IterativeLinearSolvers>

namespace chemoflux {
namespace {

using Triplet = Eigen::Triplet<double>;

constexpr double kCgTolerance = 1e-13;

}  // namespace

NeumannOperators::NeumannOperators(const DomainSpec& spec, int max_iterations)
    : spec_(spec), layout_(spec), max_iterations_(max_iterations) {
  if (spec.mode != BoundaryMode::neumann)
    throw UnsupportedMode("NeumannOperators require neumann mode");
  const Eigen::Index n = spec.cell_count();
  if (max_iterations_ <= 0) max_iterations_ = static_cast<int>(std::max<Eigen::Index>(1000, 20 * n));

  lap_mirror_ = laplacian_matrix(BoundaryKind::mirror);
  lap_no_slip_ = laplacian_matrix(BoundaryKind::no_slip);

  std::vector<Triplet> trips;
  for (int a = 0; a < spec.dim; ++a) {
    const double inv2h = 1.0 / (2.0 * layout_.h[a]);
    const Eigen::Index col0 = a * n;
    layout_.for_each([&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
      const Eigen::Index up = layout_.neighbor(idx, c, a, +1);
      const Eigen::Index dn = layout_.neighbor(idx, c, a, -1);
      // no-slip ghost: u_ghost = -u_idx
      if (up >= 0)
        trips.emplace_back(idx, col0 + up, inv2h);
      else
        trips.emplace_back(idx, col0 + idx, -inv2h);
      if (dn >= 0)
        trips.emplace_back(idx, col0 + dn, -inv2h);
      else
        trips.emplace_back(idx, col0 + idx, inv2h);
    });
  }
  divergence_.resize(n, spec.dim * n);
  divergence_.setFromTriplets(trips.begin(), trips.end());
  pressure_op_ = divergence_ * SparseMatrix(divergence_.transpose());
}

NeumannOperators::SparseMatrix NeumannOperators::laplacian_matrix(BoundaryKind kind) const {
  const Eigen::Index n = spec_.cell_count();
  std::vector<Triplet> trips;
  for (int a = 0; a < spec_.dim; ++a) {
    const double inv_h2 = 1.0 / (layout_.h[a] * layout_.h[a]);
    layout_.for_each([&](Eigen::Index idx, const std::array<Eigen::Index, 3>& c) {
      trips.emplace_back(idx, idx, -2.0 * inv_h2);
      for (int off : {-1, +1}) {
        const Eigen::Index j = layout_.neighbor(idx, c, a, off);
        if (j >= 0)
          trips.emplace_back(idx, j, inv_h2);
        else
          trips.emplace_back(idx, idx, kind == BoundaryKind::mirror ? inv_h2 : -inv_h2);
      }
    });
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

ScalarField NeumannOperators::solve_implicit_diffusion(const ScalarField& f, double dt,
                                                       BoundaryKind kind) const {
  if (kind == BoundaryKind::mirror && (f.values() == f[0]).all()) return f;
  if ((f.values() == 0.0).all()) return f;
  const SparseMatrix& lap = kind == BoundaryKind::mirror ? lap_mirror_ : lap_no_slip_;
  SparseMatrix identity(lap.rows(), lap.cols());
  identity.setIdentity();
  const SparseMatrix system = identity - dt * lap;

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(kCgTolerance);
  cg.setMaxIterations(max_iterations_);
  cg.compute(system);
  const Eigen::VectorXd rhs = f.values().matrix();
  Eigen::VectorXd x = cg.solveWithGuess(rhs, rhs);
  if (cg.info() != Eigen::Success && cg.error() > 1e-10)
    throw SolverDivergence("implicit diffusion CG did not converge (residual " +
                           std::to_string(cg.error()) + ")");
  return ScalarField(spec_, x.array());
}

VecField NeumannOperators::pressure_gradient(const ScalarField& p) const {
  const Eigen::Index n = spec_.cell_count();
  const Eigen::VectorXd g = -(divergence_.transpose() * p.values().matrix());
  VecField out(spec_);
  for (int a = 0; a < spec_.dim; ++a) out[a].values() = g.segment(a * n, n).array();
  return out;
}

std::pair<VecField, ScalarField> NeumannOperators::project(const VecField& v) const {
  const Eigen::Index n = spec_.cell_count();
  Eigen::VectorXd stacked(spec_.dim * n);
  for (int a = 0; a < spec_.dim; ++a) stacked.segment(a * n, n) = v[a].values().matrix();

  Eigen::VectorXd rhs = -(divergence_ * stacked);
  // Compatibility: the range of D D^T is orthogonal to constants.
  rhs.array() -= rhs.mean();

  ScalarField p(spec_);
  if (rhs.lpNorm<Eigen::Infinity>() > 0.0) {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(kCgTolerance);
    cg.setMaxIterations(max_iterations_);
    cg.compute(pressure_op_);
    Eigen::VectorXd x = cg.solve(rhs);
    x.array() -= x.mean();
    p.values() = x.array();
  }

  const Eigen::VectorXd u_stacked = stacked + divergence_.transpose() * p.values().matrix();
  const double residual = (divergence_ * u_stacked).lpNorm<Eigen::Infinity>();
  const double scale = std::max(1.0, stacked.lpNorm<Eigen::Infinity>() / layout_.h[0]);
  if (!(residual <= 1e-9 * scale))
    throw SolverDivergence("pressure CG did not converge (divergence residual " +
                           std::to_string(residual) + ")");

  VecField u(spec_);
  for (int a = 0; a < spec_.dim; ++a) u[a].values() = u_stacked.segment(a * n, n).array();
  return {std::move(u), std::move(p)};
}

}  // namespace chemoflux
