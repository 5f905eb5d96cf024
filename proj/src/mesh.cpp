#include "ddlab/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace ddlab {

void Mesh::finalize_topology() {
  const int nv = n_vertices();
  const int nc = n_cells();

  // Edge table in first-seen order over cells; canonical storage low < high.
  edges.clear();
  cell_edges.assign(nc, {});
  cell_edge_signs.assign(nc, {});
  std::unordered_map<long long, int> edge_ids;
  edge_ids.reserve(static_cast<std::size_t>(3 * nc));
  for (int c = 0; c < nc; ++c) {
    for (int s = 0; s < 3; ++s) {
      int a = cells[c][s];
      int b = cells[c][(s + 1) % 3];
      int lo = std::min(a, b), hi = std::max(a, b);
      long long key = static_cast<long long>(lo) * nv + hi;
      auto [it, fresh] = edge_ids.try_emplace(key, static_cast<int>(edges.size()));
      if (fresh) edges.push_back({lo, hi});
      cell_edges[c][s] = it->second;
      cell_edge_signs[c][s] = (a < b) ? 1 : -1;
    }
  }

  const int ne = n_edges();
  edge_cells.assign(ne, {-1, -1});
  for (int c = 0; c < nc; ++c) {
    for (int s = 0; s < 3; ++s) {
      auto& inc = edge_cells[cell_edges[c][s]];
      (inc[0] == -1 ? inc[0] : inc[1]) = c;
    }
  }

  boundary_edge.assign(ne, 0);
  boundary_vertex.assign(nv, 0);
  for (int e = 0; e < ne; ++e) {
    if (edge_cells[e][1] == -1) {
      boundary_edge[e] = 1;
      boundary_vertex[edges[e][0]] = 1;
      boundary_vertex[edges[e][1]] = 1;
    }
  }

  // Structured locate table keyed by cell centroids.
  const int k = n_coarse << level;
  locate_table_.assign(static_cast<std::size_t>(2) * k * k, -1);
  for (int c = 0; c < nc; ++c) {
    auto p = cell_coords(c);
    double cx = (p[0].x + p[1].x + p[2].x) / 3.0 * k;
    double cy = (p[0].y + p[1].y + p[2].y) / 3.0 * k;
    int i = static_cast<int>(cx);
    int j = static_cast<int>(cy);
    int upper = (cy - j > cx - i) ? 1 : 0;
    locate_table_[(static_cast<std::size_t>(j) * k + i) * 2 + upper] = c;
  }
}

int Mesh::locate(Vec2 p) const {
  const int k = n_coarse << level;
  double x = std::clamp(p.x, 0.0, 1.0) * k;
  double y = std::clamp(p.y, 0.0, 1.0) * k;
  int i = std::min(k - 1, static_cast<int>(x));
  int j = std::min(k - 1, static_cast<int>(y));
  int upper = (y - j > x - i) ? 1 : 0;
  return locate_table_[(static_cast<std::size_t>(j) * k + i) * 2 + upper];
}

Mesh build_coarse(int n) {
  if (n < 1) throw std::invalid_argument("build_coarse: n must be >= 1");
  Mesh m;
  m.n_coarse = n;
  m.level = 0;
  m.H_nominal = 1.0 / n;
  m.h_nominal = 1.0 / n;

  m.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  m.cells.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int sw = vid(i, j), se = vid(i + 1, j), ne = vid(i + 1, j + 1), nw = vid(i, j + 1);
      m.cells.push_back({sw, se, ne});  // below the SW-NE diagonal
      m.cells.push_back({sw, ne, nw});  // above it
    }
  }
  m.parent_cell.resize(m.cells.size());
  for (int c = 0; c < m.n_cells(); ++c) m.parent_cell[c] = c;

  m.finalize_topology();
  return m;
}

Mesh refine(const Mesh& old) {
  Mesh m;
  m.n_coarse = old.n_coarse;
  m.level = old.level + 1;
  m.H_nominal = old.H_nominal;
  m.h_nominal = old.h_nominal / 2.0;

  m.vertices = old.vertices;
  m.vertices.reserve(old.vertices.size() + old.edges.size());
  for (auto [a, b] : old.edges)
    m.vertices.push_back(0.5 * (old.vertices[a] + old.vertices[b]));

  auto mid = [&](int c, int s) { return old.n_vertices() + old.cell_edges[c][s]; };
  m.cells.reserve(static_cast<std::size_t>(4) * old.cells.size());
  m.parent_cell.reserve(4 * old.cells.size());
  for (int c = 0; c < old.n_cells(); ++c) {
    auto [v0, v1, v2] = old.cells[c];
    int m01 = mid(c, 0), m12 = mid(c, 1), m20 = mid(c, 2);
    m.cells.push_back({v0, m01, m20});
    m.cells.push_back({m01, v1, m12});
    m.cells.push_back({m20, m12, v2});
    m.cells.push_back({m01, m12, m20});
    for (int t = 0; t < 4; ++t) m.parent_cell.push_back(old.parent_cell[c]);
  }

  m.finalize_topology();
  return m;
}

std::vector<std::vector<int>> vertex_cells(const Mesh& m) {
  std::vector<std::vector<int>> inc(m.n_vertices());
  for (int c = 0; c < m.n_cells(); ++c)
    for (int v : m.cells[c]) inc[v].push_back(c);
  return inc;
}

std::vector<std::vector<int>> vertex_adjacency(const Mesh& m) {
  auto inc = vertex_cells(m);
  std::vector<std::vector<int>> adj(m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) {
    auto& nb = adj[c];
    for (int v : m.cells[c])
      for (int d : inc[v])
        if (d != c) nb.push_back(d);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

std::string Mesh::to_json() const {
  std::string out = "{\"vertices\":[";
  char buf[64];
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s[%.17g,%.17g]", i ? "," : "", vertices[i].x, vertices[i].y);
    out += buf;
  }
  out += "],\"cells\":[";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::snprintf(buf, sizeof buf, "%s[%d,%d,%d]", c ? "," : "", cells[c][0], cells[c][1], cells[c][2]);
    out += buf;
  }
  out += "],\"edges\":[";
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::snprintf(buf, sizeof buf, "%s[%d,%d]", e ? "," : "", edges[e][0], edges[e][1]);
    out += buf;
  }
  out += "],\"parent\":[";
  for (std::size_t c = 0; c < parent_cell.size(); ++c) {
    std::snprintf(buf, sizeof buf, "%s%d", c ? "," : "", parent_cell[c]);
    out += buf;
  }
  out += "]}";
  return out;
}

}  // namespace ddlab
