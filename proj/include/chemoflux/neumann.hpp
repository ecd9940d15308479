#pragma once

#include <utility>

#include <Eigen/Sparse>

#include "chemoflux/grid.hpp"

namespace chemoflux {

/// Sparse-matrix operators and conjugate-gradient solves for the walled box.
class NeumannOperators {
 public:
  using SparseMatrix = Eigen::SparseMatrix<double>;

  explicit NeumannOperators(const DomainSpec& spec, int max_iterations = 0);

  /// (I - dt * laplacian) x = f, ghost cells filled per `kind`.
  ScalarField solve_implicit_diffusion(const ScalarField& f, double dt, BoundaryKind kind) const;

  /// v = u + G p with G = -D^T the adjoint of the no-slip divergence D, so that
  /// D u = 0. Solves D D^T p = -D v by CG; p has zero mean.
  std::pair<VecField, ScalarField> project(const VecField& v) const;

  /// The pressure gradient used by `project`.
  VecField pressure_gradient(const ScalarField& p) const;

  const SparseMatrix& divergence_matrix() const { return divergence_; }

 private:
  SparseMatrix laplacian_matrix(BoundaryKind kind) const;

  DomainSpec spec_;
  Layout layout_;
  int max_iterations_;
  SparseMatrix lap_mirror_;
  SparseMatrix lap_no_slip_;
  SparseMatrix divergence_;  // N x (dim*N), stacked components
  SparseMatrix pressure_op_;  // D D^T
};

}  // namespace chemoflux
