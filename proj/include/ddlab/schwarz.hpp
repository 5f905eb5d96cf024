#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddlab/sparse.hpp"
#include "ddlab/spaces.hpp"

namespace ddlab {

/// Overlapping subdomain decomposition: one subdomain per coarse cell
/// (Omega_i = K_i), enlarged by `overlap_layers` rounds of vertex-adjacency
/// cell expansion (delta = m*h).
struct Decomposition {
  const Mesh* mesh = nullptr;
  int n_sub = 0;
  int overlap_layers = 0;
  double delta = 0.0;
  std::vector<std::vector<int>> sub_cells;  // fine cells of Omega_i', sorted
  std::vector<std::vector<int>> sub_dofs;   // free edge-DOF positions interior to Omega_i', sorted
  std::vector<int> coloring;                // color id per subdomain
  int n_colors = 0;
  bool whole_domain_warning = false;        // some Omega_i' grew to all of Omega

  /// Degenerate single-subdomain decomposition covering the whole mesh.
  static Decomposition whole_domain(const Mesh& mesh);
};

/// Requires m >= 0 and, for m >= 1, a mesh refined at least once.
Decomposition build_decomposition(const Mesh& mesh, int overlap_layers);

/// Piecewise-linear partition of unity subordinate to {Omega_i'}: nodal
/// weights clamp(layer distance to the internal patch boundary / m, 0, 1),
/// normalized so the family sums to one at every vertex.
struct PartitionOfUnity {
  std::vector<std::vector<double>> theta;  // per subdomain, nodal values on all fine vertices

  /// Diagnostic: max over subdomains and cells of |grad theta_i| * delta.
  double max_grad_times_delta(const Decomposition& dec) const;
};

PartitionOfUnity build_partition_of_unity(const Decomposition& dec);

/// Two-level additive Schwarz preconditioner
///   B^-1 r = I_H A_H^-1 I_H^T r + sum_i E_i A_i^-1 E_i^T r,
/// with A_i the principal submatrices of A_h on the subdomain DOF sets and
/// E_i extension-by-zero. Immutable after construction; apply is const.
class SchwarzPreconditioner {
 public:
  void apply(std::span<const double> r, std::span<double> z) const;
  std::vector<double> apply(std::span<const double> r) const;

  int dim() const { return dim_; }
  int n_subdomains() const { return static_cast<int>(local_.size()); }
  bool use_coarse() const { return coarse_.has_value(); }

  std::string diagnostics_json() const;

 private:
  friend SchwarzPreconditioner build_preconditioner(const SparseSymMatrix&, const SparseSymMatrix&,
                                                    const EmbeddingMatrix&, const Decomposition&,
                                                    bool, bool);
  int dim_ = 0;
  std::vector<std::vector<int>> sub_dofs_;
  std::vector<CholeskySolver> local_;
  std::optional<CholeskySolver> coarse_;
  SparseMatrix embedding_;  // owned copy of I_H
  std::vector<int> coloring_;
  int n_colors_ = 0;
};

/// Factorizes A_H and every A_i up front; throws std::runtime_error if a
/// local submatrix is not SPD (orientation or boundary-condition bug).
SchwarzPreconditioner build_preconditioner(const SparseSymMatrix& A_h, const SparseSymMatrix& A_H,
                                           const EmbeddingMatrix& I_H, const Decomposition& dec,
                                           bool use_coarse, bool use_locals = true);

/// One-level variant (no coarse matrix needed).
SchwarzPreconditioner build_preconditioner(const SparseSymMatrix& A_h, const Decomposition& dec);

}  // namespace ddlab
