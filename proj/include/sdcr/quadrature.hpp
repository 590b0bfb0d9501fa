#pragma once

#include <array>
#include <vector>

#include "sdcr/mesh.hpp"

namespace sdcr {

struct QuadraturePoint1D {
  double t = 0.0;       // in [0, 1]
  double weight = 0.0;  // weights sum to 1
};

// Gauss-Legendre rule with `points` nodes on [0, 1]; exact to degree 2*points-1.
std::vector<QuadraturePoint1D> gauss_legendre(int points);

struct TrianglePoint {
  double xi = 0.0;      // reference coordinates on {(0,0), (1,0), (0,1)}
  double eta = 0.0;
  double weight = 0.0;  // weights sum to 1 (fraction of the triangle area)
};

// Collapsed (Duffy) tensor Gauss rule exact for polynomials of total degree
// `degree` on any triangle.
std::vector<TrianglePoint> triangle_rule(int degree);

// Edge-midpoint rule, exact to degree 2.
const std::array<TrianglePoint, 3>& triangle_midpoint_rule();

inline Point2 map_to_triangle(const std::array<Point2, 3>& c, double xi, double eta) {
  return c[0] + xi * (c[1] - c[0]) + eta * (c[2] - c[0]);
}

// Number of Gauss points needed on an edge for exactness at `degree`.
inline int gauss_points_for_degree(int degree) { return degree / 2 + 1; }

}  // namespace sdcr
