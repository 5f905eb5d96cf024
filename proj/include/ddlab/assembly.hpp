#pragma once

#include <span>
#include <vector>

#include "ddlab/spaces.hpp"

namespace ddlab {

/// Galerkin matrix of a_curl(w,v) = (curl w, curl v) + (w, v) on ND0 free DOFs.
SparseSymMatrix assemble_curl(const DofSpace& space);

/// Galerkin matrix of a_div(w,v) = (div w, div v) + (w, v) on RT0 free DOFs.
SparseSymMatrix assemble_div(const DofSpace& space);

/// P1 stiffness (grad p, grad q) on free DOFs.
SparseSymMatrix assemble_p1_stiffness(const DofSpace& space);

/// Coupling G[e,v] = (phi_e, grad hat_v): ND0 free rows, P1 free columns.
/// G^T u evaluates (u, grad p)_0 against every free P1 basis function.
SparseMatrix assemble_grad_coupling(const DofSpace& p1, const DofSpace& nd);

struct HelmholtzSplit {
  std::vector<double> q;       // P1 free coefficients
  std::vector<double> w_perp;  // ND0 free coefficients, discretely divergence-free
};

/// Discrete Helmholtz decomposition u = grad q + w_perp: q solves the P1
/// system (grad q, grad p) = (u, grad p) for all p; w_perp = u - grad q.
/// Factors the P1 stiffness once, reusable across many right-hand sides.
class HelmholtzDecomposer {
 public:
  HelmholtzDecomposer(const DofSpace& p1, const DofSpace& nd);

  HelmholtzSplit split(std::span<const double> u) const;

  const SparseSymMatrix& p1_stiffness() const { return K_; }
  const SparseMatrix& grad_coupling() const { return G_; }

 private:
  const DofSpace* p1_;
  const DofSpace* nd_;
  SparseSymMatrix K_;
  SparseMatrix G_;
  CholeskySolver chol_;
};

/// max |A_H - I_H^T A_h I_H| over all coarse entries (Galerkin nesting check).
double galerkin_mismatch(const SparseSymMatrix& A_H, const SparseSymMatrix& A_h,
                         const EmbeddingMatrix& I_H);

}  // namespace ddlab
