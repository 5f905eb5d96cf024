#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace ddlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::sqrt(dot(v, v)); }
inline Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }    // +90 degrees
inline Vec2 rot270(Vec2 v) { return {v.y, -v.x}; }   // -90 degrees

/// Triangulation of the unit square: an n x n grid of squares, each split by
/// its SW-NE diagonal, red-refined `level` times. Every fine cell remembers
/// the coarse (level-0) cell containing it.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;           // vertex triples, counter-clockwise
  std::vector<std::array<int, 2>> edges;           // canonical orientation: first < second
  std::vector<std::array<int, 3>> cell_edges;      // per cell, edge ids of local pairs (0,1),(1,2),(2,0)
  std::vector<std::array<int, 3>> cell_edge_signs; // +1 if the cell traverses the edge low->high
  std::vector<std::array<int, 2>> edge_cells;      // incident cells; second = -1 on the boundary
  std::vector<char> boundary_edge;
  std::vector<char> boundary_vertex;
  std::vector<int> parent_cell;                    // coarse cell K_i containing each cell
  int level = 0;                                   // refinement count r
  int n_coarse = 0;                                // coarse grid parameter n
  double h_nominal = 0.0;                          // 1/(n 2^r)
  double H_nominal = 0.0;                          // 1/n

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }

  std::array<Vec2, 3> cell_coords(int c) const {
    return {vertices[cells[c][0]], vertices[cells[c][1]], vertices[cells[c][2]]};
  }
  double signed_area(int c) const {
    auto p = cell_coords(c);
    return 0.5 * cross(p[1] - p[0], p[2] - p[0]);
  }

  /// Index of a cell whose closure contains p. Structured O(1) lookup;
  /// points on cell interfaces resolve to the lower-left / lower-triangle slot.
  int locate(Vec2 p) const;

  /// Debug dump: {"vertices":[[x,y],...],"cells":[[a,b,c],...],"edges":[[a,b],...],"parent":[...]}
  std::string to_json() const;

  // Derived connectivity built by build_coarse/refine.
  void finalize_topology();

 private:
  std::vector<int> locate_table_;  // slot (j*k+i)*2 + upper  ->  cell id
};

/// Coarse triangulation T_H of the unit square, n x n squares split SW-NE.
/// Throws std::invalid_argument for n = 0.
Mesh build_coarse(int n);

/// Uniform red refinement: every triangle splits into 4 by edge midpoints.
Mesh refine(const Mesh& m);

/// Cell-to-cell adjacency through shared vertices (symmetric, no self-entries, sorted).
std::vector<std::vector<int>> vertex_adjacency(const Mesh& m);

/// Vertex -> incident cells (sorted).
std::vector<std::vector<int>> vertex_cells(const Mesh& m);

}  // namespace ddlab
