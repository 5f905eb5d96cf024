#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ddlab/mesh.hpp"
#include "ddlab/sparse.hpp"

namespace ddlab {

enum class SpaceKind { ND0, RT0, P1 };

const char* to_string(SpaceKind k);

/// Degree-of-freedom map for one discrete space on a mesh. DOF ids coincide
/// with the owning entity ids (edge for ND0/RT0, vertex for P1); entities on
/// the domain boundary carry the homogeneous essential condition and are
/// excluded from the free set.
struct DofSpace {
  SpaceKind kind;
  const Mesh* mesh = nullptr;
  std::vector<int> free_dofs;    // strictly increasing entity ids
  std::vector<int> dof_to_free;  // -1 where constrained
  int n_total = 0;
  int n_free = 0;

  bool edge_based() const { return kind != SpaceKind::P1; }
};

DofSpace build_space(const Mesh& mesh, SpaceKind kind);

using VectorField = std::function<Vec2(Vec2)>;
using ScalarField = std::function<double(Vec2)>;

/// ND0 interpolation: DOF = integral of the tangential component along each
/// free edge, tangent oriented low -> high vertex index.
std::vector<double> interpolate_edge(const DofSpace& space, const VectorField& field);

/// RT0 interpolation: DOF = integral of the normal component (tangent rotated
/// by -90 degrees) along each free edge.
std::vector<double> interpolate_face(const DofSpace& space, const VectorField& field);

/// P1 interpolation: nodal values at free vertices.
std::vector<double> interpolate_nodal(const DofSpace& space, const ScalarField& field);

/// Coefficient map p -> grad p from P1 into ND0 on the same mesh:
/// DOF on edge (a,b) is p(b) - p(a).
std::vector<double> gradient_coefficients(const DofSpace& p1, const DofSpace& nd,
                                          std::span<const double> p);

// Pointwise evaluation of discrete functions inside a given cell
// (free coefficient vectors; constrained DOFs are zero).
Vec2 eval_nd0(const DofSpace& s, std::span<const double> coeffs, int cell, Vec2 p);
Vec2 eval_rt0(const DofSpace& s, std::span<const double> coeffs, int cell, Vec2 p);
double eval_p1(const DofSpace& s, std::span<const double> coeffs, int cell, Vec2 p);
double cell_curl_nd0(const DofSpace& s, std::span<const double> coeffs, int cell);
double cell_div_rt0(const DofSpace& s, std::span<const double> coeffs, int cell);

/// Coarse-to-fine embedding on free DOFs. Columns are the fine-space
/// interpolants of coarse basis functions; the spaces are nested, so the
/// interpolants reproduce the coarse functions exactly.
struct EmbeddingMatrix {
  SpaceKind kind;
  SparseMatrix P;  // fine free x coarse free
  int coarse_free = 0;
  int fine_free = 0;

  std::vector<double> apply(std::span<const double> coarse) const { return P.apply(coarse); }
  std::vector<double> apply_transpose(std::span<const double> fine) const {
    return P.apply_transpose(fine);
  }
};

/// Throws std::invalid_argument on mismatched kinds or non-nested meshes.
/// The coarse space must live on an unrefined (level-0) mesh.
EmbeddingMatrix build_embedding(const DofSpace& coarse, const DofSpace& fine);

}  // namespace ddlab
