#pragma once

// Test-only oracles, kept independent of the library's assembly path:
// a degree-5 triangle quadrature and a from-scratch evaluation of the
// canonical Whitney / rotated-Whitney basis on a cell.

#include <array>
#include <cmath>
#include <functional>

#include "ddlab/mesh.hpp"

namespace oracle {

using ddlab::Mesh;
using ddlab::Vec2;

// 7-point degree-5 rule (barycentric points, weights summing to 1).
struct TriRule {
  static constexpr int n = 7;
  std::array<std::array<double, 3>, 7> pts;
  std::array<double, 7> w;
};

inline TriRule degree5_rule() {
  TriRule r;
  const double a = 0.059715871789769820, b = 0.470142064105115090;
  const double c = 0.797426985353087320, d = 0.101286507323456340;
  const double w1 = 0.132394152788506180, w2 = 0.125939180544827150;
  r.pts = {{{1.0 / 3, 1.0 / 3, 1.0 / 3},
            {a, b, b},
            {b, a, b},
            {b, b, a},
            {c, d, d},
            {d, c, d},
            {d, d, c}}};
  r.w = {0.225, w1, w1, w1, w2, w2, w2};
  return r;
}

/// Integral of f over cell `c` of the mesh, exact through degree 5.
inline double integrate(const Mesh& m, int c, const std::function<double(Vec2)>& f) {
  static const TriRule rule = degree5_rule();
  auto p = m.cell_coords(c);
  double area = 0.5 * ddlab::cross(p[1] - p[0], p[2] - p[0]);
  double s = 0.0;
  for (int q = 0; q < TriRule::n; ++q) {
    Vec2 x = rule.pts[q][0] * p[0] + rule.pts[q][1] * p[1] + rule.pts[q][2] * p[2];
    s += rule.w[q] * f(x);
  }
  return area * s;
}

/// Barycentric gradients computed independently (solve the affine system
/// lambda_a(p_b) = delta_ab by explicit inversion).
inline std::array<Vec2, 3> bary_gradients(const Mesh& m, int c) {
  auto p = m.cell_coords(c);
  double det = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
  std::array<Vec2, 3> g;
  g[1] = {(p[2].y - p[0].y) / det, -(p[2].x - p[0].x) / det};
  g[2] = {-(p[1].y - p[0].y) / det, (p[1].x - p[0].x) / det};
  g[0] = {-g[1].x - g[2].x, -g[1].y - g[2].y};
  return g;
}

inline std::array<double, 3> bary_coords(const Mesh& m, int c, Vec2 x) {
  auto p = m.cell_coords(c);
  auto g = bary_gradients(m, c);
  std::array<double, 3> lam;
  for (int a = 0; a < 3; ++a) lam[a] = 1.0 / 3 + ddlab::dot(g[a], x - (1.0 / 3) * (p[0] + p[1] + p[2]));
  return lam;
}

/// Canonical Whitney function of the cell's local edge slot s (the pair with
/// smaller global vertex id first), evaluated at x.
inline Vec2 whitney(const Mesh& m, int c, int s, Vec2 x) {
  int a = m.cells[c][s], b = m.cells[c][(s + 1) % 3];
  int la = s, lb = (s + 1) % 3;
  if (a > b) std::swap(la, lb);
  auto g = bary_gradients(m, c);
  auto lam = bary_coords(m, c, x);
  return lam[la] * g[lb] - lam[lb] * g[la];
}

inline double whitney_curl(const Mesh& m, int c, int s) {
  int a = m.cells[c][s], b = m.cells[c][(s + 1) % 3];
  int la = s, lb = (s + 1) % 3;
  if (a > b) std::swap(la, lb);
  auto g = bary_gradients(m, c);
  return 2.0 * ddlab::cross(g[la], g[lb]);
}

inline Vec2 rt(const Mesh& m, int c, int s, Vec2 x) { return ddlab::rot270(whitney(m, c, s, x)); }
inline double rt_div(const Mesh& m, int c, int s) { return whitney_curl(m, c, s); }

/// 2-point Gauss line integral of field . direction along the segment a->b,
/// with |direction| = |b-a| folded in (tangential edge functional).
inline double edge_functional(Vec2 a, Vec2 b, const std::function<Vec2(Vec2)>& f, bool normal) {
  const double x1 = 0.5 - 0.5 / std::sqrt(3.0), x2 = 0.5 + 0.5 / std::sqrt(3.0);
  Vec2 dir = b - a;
  Vec2 w = normal ? ddlab::rot270(dir) : dir;
  return 0.5 * ddlab::dot(f(a + x1 * dir), w) + 0.5 * ddlab::dot(f(a + x2 * dir), w);
}

}  // namespace oracle
