#include "ddlab/schwarz.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ddlab/element.hpp"

namespace ddlab {

namespace {

// Free positions of interior edges whose incident cells all lie in the patch.
std::vector<int> interior_edge_dofs(const Mesh& m, const std::vector<char>& in_patch) {
  std::vector<int> dofs;
  int free_pos = 0;
  for (int e = 0; e < m.n_edges(); ++e) {
    if (m.boundary_edge[e]) continue;
    auto [c0, c1] = m.edge_cells[e];
    if (in_patch[c0] && in_patch[c1]) dofs.push_back(free_pos);
    ++free_pos;
  }
  return dofs;
}

}  // namespace

Decomposition Decomposition::whole_domain(const Mesh& mesh) {
  Decomposition dec;
  dec.mesh = &mesh;
  dec.n_sub = 1;
  dec.overlap_layers = 0;
  dec.delta = 0.0;
  dec.sub_cells.resize(1);
  dec.sub_cells[0].resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) dec.sub_cells[0][c] = c;
  std::vector<char> all(mesh.n_cells(), 1);
  dec.sub_dofs.push_back(interior_edge_dofs(mesh, all));
  dec.coloring = {0};
  dec.n_colors = 1;
  dec.whole_domain_warning = true;
  return dec;
}

Decomposition build_decomposition(const Mesh& mesh, int overlap_layers) {
  if (overlap_layers < 0) throw std::invalid_argument("build_decomposition: overlap_layers < 0");
  if (overlap_layers >= 1 && mesh.level < 1)
    throw std::invalid_argument("build_decomposition: m >= 1 needs a refined mesh");

  Decomposition dec;
  dec.mesh = &mesh;
  dec.n_sub = 2 * mesh.n_coarse * mesh.n_coarse;
  dec.overlap_layers = overlap_layers;
  dec.delta = overlap_layers * mesh.h_nominal;

  auto adjacency = vertex_adjacency(mesh);

  dec.sub_cells.resize(dec.n_sub);
  dec.sub_dofs.resize(dec.n_sub);
  std::vector<std::vector<int>> cell_subs(mesh.n_cells());  // subdomains per cell

  std::vector<char> in_patch(mesh.n_cells(), 0);
  for (int i = 0; i < dec.n_sub; ++i) {
    std::vector<int> frontier;
    for (int c = 0; c < mesh.n_cells(); ++c)
      if (mesh.parent_cell[c] == i) {
        in_patch[c] = 1;
        frontier.push_back(c);
      }
    std::vector<int> patch = frontier;
    for (int round = 0; round < overlap_layers; ++round) {
      std::vector<int> next;
      for (int c : frontier)
        for (int d : adjacency[c])
          if (!in_patch[d]) {
            in_patch[d] = 1;
            next.push_back(d);
          }
      patch.insert(patch.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    std::sort(patch.begin(), patch.end());
    if (static_cast<int>(patch.size()) == mesh.n_cells()) dec.whole_domain_warning = true;
    dec.sub_dofs[i] = interior_edge_dofs(mesh, in_patch);
    for (int c : patch) {
      in_patch[c] = 0;
      cell_subs[c].push_back(i);
    }
    dec.sub_cells[i] = std::move(patch);
  }

  // Greedy coloring of the cell-intersection graph in subdomain-index order.
  std::vector<std::vector<int>> conflicts(dec.n_sub);
  for (const auto& subs : cell_subs)
    for (std::size_t a = 0; a < subs.size(); ++a)
      for (std::size_t b = a + 1; b < subs.size(); ++b) {
        conflicts[subs[a]].push_back(subs[b]);
        conflicts[subs[b]].push_back(subs[a]);
      }
  dec.coloring.assign(dec.n_sub, -1);
  for (int i = 0; i < dec.n_sub; ++i) {
    std::vector<char> used(dec.n_sub, 0);
    for (int j : conflicts[i])
      if (dec.coloring[j] >= 0) used[dec.coloring[j]] = 1;
    int color = 0;
    while (used[color]) ++color;
    dec.coloring[i] = color;
    dec.n_colors = std::max(dec.n_colors, color + 1);
  }
  return dec;
}

PartitionOfUnity build_partition_of_unity(const Decomposition& dec) {
  if (dec.overlap_layers < 1)
    throw std::invalid_argument("build_partition_of_unity: requires overlap m >= 1");
  const Mesh& m = *dec.mesh;
  const int nv = m.n_vertices();
  const int layers = dec.overlap_layers;

  // Vertex graph restricted to the patch is walked by BFS from the internal
  // patch boundary (patch edges on the domain boundary do not seed it).
  std::vector<std::vector<int>> vert_edges(nv);
  for (int e = 0; e < m.n_edges(); ++e) {
    vert_edges[m.edges[e][0]].push_back(e);
    vert_edges[m.edges[e][1]].push_back(e);
  }

  PartitionOfUnity pou;
  pou.theta.assign(dec.n_sub, std::vector<double>(nv, 0.0));

  std::vector<char> in_patch(m.n_cells(), 0);
  std::vector<char> in_closure(nv, 0);
  std::vector<int> dist(nv);
  for (int i = 0; i < dec.n_sub; ++i) {
    for (int c : dec.sub_cells[i]) in_patch[c] = 1;
    std::vector<int> patch_verts;
    for (int c : dec.sub_cells[i])
      for (int v : m.cells[c])
        if (!in_closure[v]) {
          in_closure[v] = 1;
          patch_verts.push_back(v);
        }

    std::vector<int> frontier;
    for (int v : patch_verts) dist[v] = -1;
    for (int e = 0; e < m.n_edges(); ++e) {
      if (m.boundary_edge[e]) continue;
      auto [c0, c1] = m.edge_cells[e];
      if (in_patch[c0] == in_patch[c1]) continue;
      for (int v : m.edges[e])
        if (in_closure[v] && dist[v] != 0) {
          dist[v] = 0;
          frontier.push_back(v);
        }
    }
    int level = 0;
    while (!frontier.empty() && level < layers) {
      ++level;
      std::vector<int> next;
      for (int v : frontier)
        for (int e : vert_edges[v]) {
          int u = m.edges[e][0] == v ? m.edges[e][1] : m.edges[e][0];
          if (in_closure[u] && dist[u] == -1) {
            dist[u] = level;
            next.push_back(u);
          }
        }
      frontier = std::move(next);
    }
    auto& w = pou.theta[i];
    for (int v : patch_verts) {
      int d = dist[v] == -1 ? layers : dist[v];  // unreachable = deep interior
      w[v] = std::min(1.0, static_cast<double>(d) / layers);
    }
    for (int c : dec.sub_cells[i]) in_patch[c] = 0;
    for (int v : patch_verts) in_closure[v] = 0;
  }

  for (int v = 0; v < nv; ++v) {
    double sum = 0.0;
    for (int i = 0; i < dec.n_sub; ++i) sum += pou.theta[i][v];
    if (sum <= 0.0)
      throw std::runtime_error("build_partition_of_unity: uncovered vertex (decomposition bug)");
    for (int i = 0; i < dec.n_sub; ++i) pou.theta[i][v] /= sum;
  }
  return pou;
}

double PartitionOfUnity::max_grad_times_delta(const Decomposition& dec) const {
  const Mesh& m = *dec.mesh;
  double worst = 0.0;
  for (int i = 0; i < dec.n_sub; ++i) {
    const auto& th = theta[i];
    for (int c = 0; c < m.n_cells(); ++c) {
      auto [a, b, d] = m.cells[c];
      if (th[a] == 0.0 && th[b] == 0.0 && th[d] == 0.0) continue;
      TriGeometry g = TriGeometry::from(m, c);
      Vec2 grad = th[a] * g.grad_lambda[0] + th[b] * g.grad_lambda[1] + th[d] * g.grad_lambda[2];
      worst = std::max(worst, norm(grad));
    }
  }
  return worst * dec.delta;
}

SchwarzPreconditioner build_preconditioner(const SparseSymMatrix& A_h, const SparseSymMatrix& A_H,
                                           const EmbeddingMatrix& I_H, const Decomposition& dec,
                                           bool use_coarse, bool use_locals) {
  if (use_coarse && (I_H.fine_free != A_h.n || I_H.coarse_free != A_H.n))
    throw std::invalid_argument("build_preconditioner: inconsistent dimensions");

  SchwarzPreconditioner P;
  P.dim_ = A_h.n;
  P.coloring_ = dec.coloring;
  P.n_colors_ = dec.n_colors;
  if (use_locals) {
    P.sub_dofs_ = dec.sub_dofs;
    P.local_.reserve(dec.sub_dofs.size());
    for (const auto& dofs : dec.sub_dofs)
      P.local_.emplace_back(A_h.principal_submatrix(dofs));
  }
  if (use_coarse) {
    P.coarse_.emplace(A_H);
    P.embedding_ = I_H.P;
  }
  return P;
}

SchwarzPreconditioner build_preconditioner(const SparseSymMatrix& A_h, const Decomposition& dec) {
  SparseSymMatrix none;
  EmbeddingMatrix no_embed;
  return build_preconditioner(A_h, none, no_embed, dec, false, true);
}

void SchwarzPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  assert(static_cast<int>(r.size()) == dim_ && static_cast<int>(z.size()) == dim_);
  std::fill(z.begin(), z.end(), 0.0);

  if (coarse_) {
    std::vector<double> rc = embedding_.apply_transpose(r);
    std::vector<double> yc = coarse_->solve(rc);
    std::vector<double> zf(dim_);
    embedding_.apply(yc, zf);
    for (int k = 0; k < dim_; ++k) z[k] += zf[k];
  }

  // Local contributions accumulate in subdomain-index order (determinism).
  std::vector<double> ri, yi;
  for (std::size_t i = 0; i < local_.size(); ++i) {
    const auto& dofs = sub_dofs_[i];
    ri.resize(dofs.size());
    yi.resize(dofs.size());
    for (std::size_t k = 0; k < dofs.size(); ++k) ri[k] = r[dofs[k]];
    local_[i].solve(ri, yi);
    for (std::size_t k = 0; k < dofs.size(); ++k) z[dofs[k]] += yi[k];
  }
}

std::vector<double> SchwarzPreconditioner::apply(std::span<const double> r) const {
  std::vector<double> z(dim_);
  apply(r, z);
  return z;
}

std::string SchwarzPreconditioner::diagnostics_json() const {
  std::string out = "{\"n_sub\":" + std::to_string(local_.size());
  out += ",\"use_coarse\":" + std::string(coarse_ ? "true" : "false");
  out += ",\"n_colors\":" + std::to_string(n_colors_);
  out += ",\"dof_counts\":[";
  for (std::size_t i = 0; i < sub_dofs_.size(); ++i)
    out += (i ? "," : "") + std::to_string(sub_dofs_[i].size());
  out += "],\"coloring\":[";
  for (std::size_t i = 0; i < coloring_.size(); ++i)
    out += (i ? "," : "") + std::to_string(coloring_[i]);
  out += "]}";
  return out;
}

}  // namespace ddlab
