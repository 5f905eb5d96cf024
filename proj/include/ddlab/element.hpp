#pragma once

#include <array>

#include "ddlab/mesh.hpp"

namespace ddlab {

/// Affine geometry of one triangle: coordinates, area, barycentric gradients.
struct TriGeometry {
  std::array<Vec2, 3> p;
  double area = 0.0;
  std::array<Vec2, 3> grad_lambda;

  static TriGeometry from(const Mesh& m, int cell) {
    TriGeometry g;
    g.p = m.cell_coords(cell);
    double a2 = cross(g.p[1] - g.p[0], g.p[2] - g.p[0]);  // 2*area, positive for CCW
    g.area = 0.5 * a2;
    for (int a = 0; a < 3; ++a)
      g.grad_lambda[a] = (1.0 / a2) * rot90(g.p[(a + 2) % 3] - g.p[(a + 1) % 3]);
    return g;
  }

  std::array<double, 3> barycentric(Vec2 q) const {
    double a2 = 2.0 * area;
    double l1 = cross(q - p[0], p[2] - p[0]) / a2;
    double l2 = cross(p[1] - p[0], q - p[0]) / a2;
    return {1.0 - l1 - l2, l1, l2};
  }

  Vec2 point(const std::array<double, 3>& lam) const {
    return lam[0] * p[0] + lam[1] * p[1] + lam[2] * p[2];
  }
};

// Whitney edge functions in the cell's traversal order, flipped to the
// canonical (low -> high vertex index) orientation by the stored sign:
//   phi_s = sign_s * (lambda_a grad_b - lambda_b grad_a),  a = s, b = (s+1)%3.
// The RT0 basis is the -90 degree rotation of the ND0 basis; with DOFs
// normalized as edge integrals its divergence equals the ND0 curl.

inline Vec2 whitney_edge(const TriGeometry& g, int sign, int s, const std::array<double, 3>& lam) {
  int a = s, b = (s + 1) % 3;
  Vec2 v = lam[a] * g.grad_lambda[b] - lam[b] * g.grad_lambda[a];
  return static_cast<double>(sign) * v;
}

inline double whitney_curl(const TriGeometry& g, int sign, int s) {
  int a = s, b = (s + 1) % 3;
  return sign * 2.0 * cross(g.grad_lambda[a], g.grad_lambda[b]);
}

inline Vec2 rt_basis(const TriGeometry& g, int sign, int s, const std::array<double, 3>& lam) {
  return rot270(whitney_edge(g, sign, s, lam));
}

inline double rt_div(const TriGeometry& g, int sign, int s) {
  return whitney_curl(g, sign, s);
}

}  // namespace ddlab
