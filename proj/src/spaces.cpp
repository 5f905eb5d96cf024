#include "ddlab/spaces.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "ddlab/element.hpp"

namespace ddlab {

const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::ND0: return "ND0";
    case SpaceKind::RT0: return "RT0";
    case SpaceKind::P1: return "P1";
  }
  return "?";
}

DofSpace build_space(const Mesh& mesh, SpaceKind kind) {
  DofSpace s;
  s.kind = kind;
  s.mesh = &mesh;
  const bool edge_based = kind != SpaceKind::P1;
  s.n_total = edge_based ? mesh.n_edges() : mesh.n_vertices();
  s.dof_to_free.assign(s.n_total, -1);
  for (int d = 0; d < s.n_total; ++d) {
    bool constrained = edge_based ? mesh.boundary_edge[d] : mesh.boundary_vertex[d];
    if (!constrained) {
      s.dof_to_free[d] = static_cast<int>(s.free_dofs.size());
      s.free_dofs.push_back(d);
    }
  }
  s.n_free = static_cast<int>(s.free_dofs.size());
  return s;
}

namespace {

// 4-point Gauss-Legendre on [0,1]; exact for cubics, comfortably above the
// linear integrands the discrete spaces produce along an edge.
constexpr int kSegPts = 4;
constexpr double kSegXi[kSegPts] = {0.5 - 0.5 * 0.8611363115940526, 0.5 - 0.5 * 0.3399810435848563,
                                    0.5 + 0.5 * 0.3399810435848563, 0.5 + 0.5 * 0.8611363115940526};
constexpr double kSegW[kSegPts] = {0.5 * 0.3478548451374538, 0.5 * 0.6521451548625461,
                                   0.5 * 0.6521451548625461, 0.5 * 0.3478548451374538};

std::vector<double> interpolate_on_edges(const DofSpace& space, const VectorField& field,
                                         bool normal_component) {
  const Mesh& m = *space.mesh;
  std::vector<double> out(space.n_free);
  for (int p = 0; p < space.n_free; ++p) {
    auto [a, b] = m.edges[space.free_dofs[p]];
    Vec2 pa = m.vertices[a], pb = m.vertices[b];
    Vec2 dir = pb - pa;                                     // tangent * length
    Vec2 weight = normal_component ? rot270(dir) : dir;     // normal * length
    double v = 0.0;
    for (int g = 0; g < kSegPts; ++g) {
      Vec2 x = pa + kSegXi[g] * dir;
      v += kSegW[g] * dot(field(x), weight);
    }
    out[p] = v;
  }
  return out;
}

}  // namespace

std::vector<double> interpolate_edge(const DofSpace& space, const VectorField& field) {
  if (space.kind != SpaceKind::ND0)
    throw std::invalid_argument("interpolate_edge: space kind must be ND0");
  return interpolate_on_edges(space, field, false);
}

std::vector<double> interpolate_face(const DofSpace& space, const VectorField& field) {
  if (space.kind != SpaceKind::RT0)
    throw std::invalid_argument("interpolate_face: space kind must be RT0");
  return interpolate_on_edges(space, field, true);
}

std::vector<double> interpolate_nodal(const DofSpace& space, const ScalarField& field) {
  if (space.kind != SpaceKind::P1)
    throw std::invalid_argument("interpolate_nodal: space kind must be P1");
  std::vector<double> out(space.n_free);
  for (int p = 0; p < space.n_free; ++p) out[p] = field(space.mesh->vertices[space.free_dofs[p]]);
  return out;
}

std::vector<double> gradient_coefficients(const DofSpace& p1, const DofSpace& nd,
                                          std::span<const double> p) {
  if (p1.kind != SpaceKind::P1 || nd.kind != SpaceKind::ND0 || p1.mesh != nd.mesh)
    throw std::invalid_argument("gradient_coefficients: need P1 and ND0 on the same mesh");
  const Mesh& m = *p1.mesh;
  auto nodal = [&](int v) {
    int f = p1.dof_to_free[v];
    return f >= 0 ? p[f] : 0.0;
  };
  std::vector<double> g(nd.n_free);
  for (int q = 0; q < nd.n_free; ++q) {
    auto [a, b] = m.edges[nd.free_dofs[q]];
    g[q] = nodal(b) - nodal(a);
  }
  return g;
}

namespace {

double free_coeff(const DofSpace& s, std::span<const double> coeffs, int dof) {
  int f = s.dof_to_free[dof];
  return f >= 0 ? coeffs[f] : 0.0;
}

}  // namespace

Vec2 eval_nd0(const DofSpace& s, std::span<const double> coeffs, int cell, Vec2 p) {
  const Mesh& m = *s.mesh;
  TriGeometry g = TriGeometry::from(m, cell);
  auto lam = g.barycentric(p);
  Vec2 v{0.0, 0.0};
  for (int t = 0; t < 3; ++t)
    v = v + free_coeff(s, coeffs, m.cell_edges[cell][t]) *
                whitney_edge(g, m.cell_edge_signs[cell][t], t, lam);
  return v;
}

Vec2 eval_rt0(const DofSpace& s, std::span<const double> coeffs, int cell, Vec2 p) {
  const Mesh& m = *s.mesh;
  TriGeometry g = TriGeometry::from(m, cell);
  auto lam = g.barycentric(p);
  Vec2 v{0.0, 0.0};
  for (int t = 0; t < 3; ++t)
    v = v + free_coeff(s, coeffs, m.cell_edges[cell][t]) *
                rt_basis(g, m.cell_edge_signs[cell][t], t, lam);
  return v;
}

double eval_p1(const DofSpace& s, std::span<const double> coeffs, int cell, Vec2 p) {
  const Mesh& m = *s.mesh;
  TriGeometry g = TriGeometry::from(m, cell);
  auto lam = g.barycentric(p);
  double v = 0.0;
  for (int a = 0; a < 3; ++a) v += free_coeff(s, coeffs, m.cells[cell][a]) * lam[a];
  return v;
}

double cell_curl_nd0(const DofSpace& s, std::span<const double> coeffs, int cell) {
  const Mesh& m = *s.mesh;
  TriGeometry g = TriGeometry::from(m, cell);
  double c = 0.0;
  for (int t = 0; t < 3; ++t)
    c += free_coeff(s, coeffs, m.cell_edges[cell][t]) *
         whitney_curl(g, m.cell_edge_signs[cell][t], t);
  return c;
}

double cell_div_rt0(const DofSpace& s, std::span<const double> coeffs, int cell) {
  const Mesh& m = *s.mesh;
  TriGeometry g = TriGeometry::from(m, cell);
  double d = 0.0;
  for (int t = 0; t < 3; ++t)
    d += free_coeff(s, coeffs, m.cell_edges[cell][t]) * rt_div(g, m.cell_edge_signs[cell][t], t);
  return d;
}

namespace {

// Entries are written once per (fine, coarse) pair but revisited from every
// fine cell touching the fine entity; revisits must reproduce the same value
// (tangential/normal/nodal traces of the coarse function are single-valued).
class ConsistentEntryMap {
 public:
  explicit ConsistentEntryMap(int cols) : cols_(cols) {}

  void set(int i, int j, double v) {
    if (std::fabs(v) < 1e-14) return;
    long long key = static_cast<long long>(i) * cols_ + j;
    auto [it, fresh] = map_.try_emplace(key, v);
    if (!fresh && std::fabs(it->second - v) > 1e-11 * (1.0 + std::fabs(it->second)))
      throw std::logic_error("build_embedding: inconsistent revisit of an entry");
  }

  SparseMatrix compress(int rows) const {
    SparseBuilder b(rows, cols_);
    for (auto [key, v] : map_) b.add(static_cast<int>(key / cols_), static_cast<int>(key % cols_), v);
    return b.compress();
  }

 private:
  int cols_;
  std::unordered_map<long long, double> map_;
};

// 2-point Gauss on [0,1]: exact for the linear edge traces of coarse basis
// functions.
constexpr double kXi2[2] = {0.5 - 0.5 / 1.7320508075688772, 0.5 + 0.5 / 1.7320508075688772};

}  // namespace

EmbeddingMatrix build_embedding(const DofSpace& coarse, const DofSpace& fine) {
  if (coarse.kind != fine.kind)
    throw std::invalid_argument("build_embedding: space kinds differ");
  const Mesh& mc = *coarse.mesh;
  const Mesh& mf = *fine.mesh;
  if (mc.level != 0 || mc.n_coarse != mf.n_coarse || mf.level < 1)
    throw std::invalid_argument("build_embedding: fine mesh is not a refinement of the coarse mesh");

  ConsistentEntryMap entries(coarse.n_free);

  for (int fc = 0; fc < mf.n_cells(); ++fc) {
    int K = mf.parent_cell[fc];
    TriGeometry gK = TriGeometry::from(mc, K);

    if (coarse.kind == SpaceKind::P1) {
      for (int a = 0; a < 3; ++a) {
        int fv = mf.cells[fc][a];
        int row = fine.dof_to_free[fv];
        if (row < 0) continue;
        auto lam = gK.barycentric(mf.vertices[fv]);
        for (int ca = 0; ca < 3; ++ca) {
          int col = coarse.dof_to_free[mc.cells[K][ca]];
          if (col >= 0) entries.set(row, col, lam[ca]);
        }
      }
      continue;
    }

    const bool is_rt = coarse.kind == SpaceKind::RT0;
    for (int t = 0; t < 3; ++t) {
      int fe = mf.cell_edges[fc][t];
      int row = fine.dof_to_free[fe];
      if (row < 0) continue;
      auto [a, b] = mf.edges[fe];
      Vec2 pa = mf.vertices[a], pb = mf.vertices[b];
      Vec2 dir = pb - pa;
      Vec2 weight = is_rt ? rot270(dir) : dir;
      for (int s = 0; s < 3; ++s) {
        int col = coarse.dof_to_free[mc.cell_edges[K][s]];
        if (col < 0) continue;
        int sign = mc.cell_edge_signs[K][s];
        double v = 0.0;
        for (double xi : kXi2) {
          auto lam = gK.barycentric(pa + xi * dir);
          Vec2 phi = is_rt ? rt_basis(gK, sign, s, lam) : whitney_edge(gK, sign, s, lam);
          v += 0.5 * dot(phi, weight);
        }
        entries.set(row, col, v);
      }
    }
  }

  EmbeddingMatrix E;
  E.kind = coarse.kind;
  E.coarse_free = coarse.n_free;
  E.fine_free = fine.n_free;
  E.P = entries.compress(fine.n_free);
  return E;
}

}  // namespace ddlab
