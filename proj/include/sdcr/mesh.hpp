#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sdcr {

using Index = int;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Point2 = Vec2;

inline constexpr Index kNoElement = -1;

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Region : std::uint8_t { Stokes, Darcy };

enum class EdgeClass : std::uint8_t {
  InteriorStokes,
  GammaS,
  InteriorDarcy,
  GammaD,
  InterfaceI,
};

// The three edge families that each carry exactly one jump-penalty term:
// interior Stokes plus the Stokes outer boundary, interior Darcy, and the
// Darcy boundary including the interface.
enum class PenaltyGroup : std::uint8_t { StokesClosure, DarcyInterior, DarcyBoundary };

PenaltyGroup penalty_group(EdgeClass cls);
const char* to_string(Region region);
const char* to_string(EdgeClass cls);

// Rectangle [x_min, x_max] x [y_min, y_max] cut by the vertical interface
// x = x_interface. Stokes occupies the left part, Darcy the right.
struct TwoRegionDomain {
  double x_min = 0.0;
  double x_interface = 1.0;
  double x_max = 2.0;
  double y_min = 0.0;
  double y_max = 1.0;

  void validate() const;
  Region region_of(const Point2& centroid) const;
  bool on_interface(const Point2& p, double tol) const;
  double area() const { return (x_max - x_min) * (y_max - y_min); }
};

struct Triangle {
  std::array<Index, 3> vertices{};  // counterclockwise
  std::array<Index, 3> edges{};     // local edge i is opposite vertex i
  Region region = Region::Stokes;
  double area = 0.0;
  double diameter = 0.0;
  double inradius = 0.0;
};

struct Edge {
  std::array<Index, 2> vertices{};
  // elements[0] is the element whose outward normal equals `normal`;
  // elements[1] is kNoElement on the boundary of the domain.
  std::array<Index, 2> elements{kNoElement, kNoElement};
  Vec2 normal = Vec2::Zero();
  Point2 midpoint = Point2::Zero();
  double length = 0.0;
  EdgeClass cls = EdgeClass::InteriorStokes;

  bool is_boundary() const { return elements[1] == kNoElement; }
  // Unit tangent: the normal rotated by +90 degrees.
  Vec2 tangent() const { return Vec2(-normal.y(), normal.x()); }
};

class Mesh {
 public:
  // Builds edges, geometric metadata and the edge classification from raw
  // triangles. Clockwise triangles are reoriented; degenerate ones rejected.
  static Mesh from_triangles(std::vector<Point2> vertices,
                             std::vector<std::array<Index, 3>> triangles,
                             std::vector<Region> regions,
                             const TwoRegionDomain& domain);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const TwoRegionDomain& domain() const { return domain_; }

  const Point2& vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Triangle& triangle(Index t) const { return triangles_[static_cast<std::size_t>(t)]; }
  const Edge& edge(Index e) const { return edges_[static_cast<std::size_t>(e)]; }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }

  double h() const { return h_; }
  double sigma_h() const { return sigma_h_; }

  // Vertex coordinates of triangle t in its counterclockwise order.
  std::array<Point2, 3> corners(Index t) const;
  Point2 centroid(Index t) const;

  // Local index (0..2) of edge e inside triangle t, or -1.
  int local_edge_index(Index t, Index e) const;

  // Outward unit normal of local edge i of triangle t.
  Vec2 outward_normal(Index t, int local_edge) const;

 private:
  friend Mesh classify_edges(Mesh mesh);

  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  TwoRegionDomain domain_;
  double h_ = 0.0;
  double sigma_h_ = 0.0;
};

// Uniform (2n) x n grid over the two-region domain (n cells across each
// subdomain and n cells vertically), every cell cut by its
// lower-left -> upper-right diagonal.
Mesh build_structured_mesh(int n, const TwoRegionDomain& domain = {});

// Assigns each edge its EdgeClass. Throws MeshError when two elements of
// different regions meet away from the declared interface.
Mesh classify_edges(Mesh mesh);

struct MeshStatistics {
  double h = 0.0;
  double sigma_h = 0.0;
};

// Maximum element diameter and maximum h_T / (2 r_T).
MeshStatistics mesh_statistics(const Mesh& mesh);

}  // namespace sdcr
