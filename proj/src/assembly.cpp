#include "ddlab/assembly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ddlab/element.hpp"

namespace ddlab {

namespace {

// Edge-midpoint rule: order 2, exact for every integrand the lowest-order
// spaces produce (Whitney products are quadratic).
constexpr std::array<std::array<double, 3>, 3> kTriPts = {{
    {0.5, 0.5, 0.0},
    {0.0, 0.5, 0.5},
    {0.5, 0.0, 0.5},
}};

using Element33 = std::array<std::array<double, 3>, 3>;

Element33 edge_element_matrix(const TriGeometry& g, const std::array<int, 3>& signs, bool rt) {
  Element33 el{};
  std::array<double, 3> d;
  for (int s = 0; s < 3; ++s) d[s] = rt ? rt_div(g, signs[s], s) : whitney_curl(g, signs[s], s);
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 3; ++t) el[s][t] = g.area * d[s] * d[t];

  for (const auto& lam : kTriPts) {
    std::array<Vec2, 3> phi;
    for (int s = 0; s < 3; ++s)
      phi[s] = rt ? rt_basis(g, signs[s], s, lam) : whitney_edge(g, signs[s], s, lam);
    for (int s = 0; s < 3; ++s)
      for (int t = 0; t < 3; ++t) el[s][t] += (g.area / 3.0) * dot(phi[s], phi[t]);
  }
  return el;
}

SparseSymMatrix assemble_edge_form(const DofSpace& space, bool rt) {
  const Mesh& m = *space.mesh;
  SparseBuilder b(space.n_free, space.n_free);
  b.reserve(static_cast<std::size_t>(9) * m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) {
    TriGeometry g = TriGeometry::from(m, c);
    Element33 el = edge_element_matrix(g, m.cell_edge_signs[c], rt);
    std::array<int, 3> rows;
    for (int s = 0; s < 3; ++s) rows[s] = space.dof_to_free[m.cell_edges[c][s]];
    for (int s = 0; s < 3; ++s)
      for (int t = 0; t < 3; ++t)
        if (rows[s] >= 0 && rows[t] >= 0) b.add(rows[s], rows[t], el[s][t]);
  }
  return b.compress_symmetric();
}

}  // namespace

SparseSymMatrix assemble_curl(const DofSpace& space) {
  if (space.kind != SpaceKind::ND0)
    throw std::invalid_argument("assemble_curl: space kind must be ND0");
  return assemble_edge_form(space, false);
}

SparseSymMatrix assemble_div(const DofSpace& space) {
  if (space.kind != SpaceKind::RT0)
    throw std::invalid_argument("assemble_div: space kind must be RT0");
  return assemble_edge_form(space, true);
}

SparseSymMatrix assemble_p1_stiffness(const DofSpace& space) {
  if (space.kind != SpaceKind::P1)
    throw std::invalid_argument("assemble_p1_stiffness: space kind must be P1");
  const Mesh& m = *space.mesh;
  SparseBuilder b(space.n_free, space.n_free);
  b.reserve(static_cast<std::size_t>(9) * m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) {
    TriGeometry g = TriGeometry::from(m, c);
    std::array<int, 3> rows;
    for (int a = 0; a < 3; ++a) rows[a] = space.dof_to_free[m.cells[c][a]];
    for (int a = 0; a < 3; ++a)
      for (int d = 0; d < 3; ++d)
        if (rows[a] >= 0 && rows[d] >= 0)
          b.add(rows[a], rows[d], g.area * dot(g.grad_lambda[a], g.grad_lambda[d]));
  }
  return b.compress_symmetric();
}

SparseMatrix assemble_grad_coupling(const DofSpace& p1, const DofSpace& nd) {
  if (p1.kind != SpaceKind::P1 || nd.kind != SpaceKind::ND0)
    throw std::invalid_argument("assemble_grad_coupling: need P1 and ND0 spaces");
  if (p1.mesh != nd.mesh) throw std::invalid_argument("assemble_grad_coupling: mesh mismatch");
  const Mesh& m = *p1.mesh;
  SparseBuilder b(nd.n_free, p1.n_free);
  b.reserve(static_cast<std::size_t>(9) * m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) {
    TriGeometry g = TriGeometry::from(m, c);
    std::array<int, 3> erow, vcol;
    for (int s = 0; s < 3; ++s) erow[s] = nd.dof_to_free[m.cell_edges[c][s]];
    for (int a = 0; a < 3; ++a) vcol[a] = p1.dof_to_free[m.cells[c][a]];
    for (const auto& lam : kTriPts) {
      for (int s = 0; s < 3; ++s) {
        if (erow[s] < 0) continue;
        Vec2 phi = whitney_edge(g, m.cell_edge_signs[c][s], s, lam);
        for (int a = 0; a < 3; ++a)
          if (vcol[a] >= 0)
            b.add(erow[s], vcol[a], (g.area / 3.0) * dot(phi, g.grad_lambda[a]));
      }
    }
  }
  return b.compress();
}

HelmholtzDecomposer::HelmholtzDecomposer(const DofSpace& p1, const DofSpace& nd)
    : p1_(&p1),
      nd_(&nd),
      K_(assemble_p1_stiffness(p1)),
      G_(assemble_grad_coupling(p1, nd)),
      chol_(K_) {}

HelmholtzSplit HelmholtzDecomposer::split(std::span<const double> u) const {
  std::vector<double> rhs = G_.apply_transpose(u);
  std::vector<double> q = chol_.solve(rhs);

  // One step of iterative refinement keeps the relative residual near
  // machine precision (the contract asks for <= 1e-12).
  std::vector<double> r = K_.apply(q);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
  std::vector<double> dq = chol_.solve(r);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] += dq[i];

  HelmholtzSplit out;
  out.w_perp = gradient_coefficients(*p1_, *nd_, q);
  for (std::size_t i = 0; i < out.w_perp.size(); ++i) out.w_perp[i] = u[i] - out.w_perp[i];
  out.q = std::move(q);
  return out;
}

double galerkin_mismatch(const SparseSymMatrix& A_H, const SparseSymMatrix& A_h,
                         const EmbeddingMatrix& I_H) {
  const int nc = A_H.n;
  std::vector<double> ej(nc, 0.0), col(nc);
  double mismatch = 0.0;
  for (int j = 0; j < nc; ++j) {
    ej[j] = 1.0;
    std::vector<double> fine = I_H.apply(ej);
    std::vector<double> Afine = A_h.apply(fine);
    I_H.P.apply_transpose(Afine, col);
    ej[j] = 0.0;
    for (int i = 0; i < nc; ++i) mismatch = std::max(mismatch, std::fabs(col[i] - A_H.coeff(i, j)));
  }
  return mismatch;
}

}  // namespace ddlab
