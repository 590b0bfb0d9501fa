#include "sdcr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace sdcr {

PenaltyGroup penalty_group(EdgeClass cls) {
  switch (cls) {
    case EdgeClass::InteriorStokes:
    case EdgeClass::GammaS:
      return PenaltyGroup::StokesClosure;
    case EdgeClass::InteriorDarcy:
      return PenaltyGroup::DarcyInterior;
    case EdgeClass::GammaD:
    case EdgeClass::InterfaceI:
      return PenaltyGroup::DarcyBoundary;
  }
  return PenaltyGroup::StokesClosure;
}

const char* to_string(Region region) {
  return region == Region::Stokes ? "stokes" : "darcy";
}

const char* to_string(EdgeClass cls) {
  switch (cls) {
    case EdgeClass::InteriorStokes: return "interior_stokes";
    case EdgeClass::GammaS: return "gamma_s";
    case EdgeClass::InteriorDarcy: return "interior_darcy";
    case EdgeClass::GammaD: return "gamma_d";
    case EdgeClass::InterfaceI: return "interface";
  }
  return "?";
}

void TwoRegionDomain::validate() const {
  const bool finite = std::isfinite(x_min) && std::isfinite(x_interface) &&
                      std::isfinite(x_max) && std::isfinite(y_min) && std::isfinite(y_max);
  if (!finite || !(x_min < x_interface) || !(x_interface < x_max) || !(y_min < y_max)) {
    throw MeshError("degenerate two-region domain: need x_min < x_interface < x_max and y_min < y_max");
  }
}

Region TwoRegionDomain::region_of(const Point2& centroid) const {
  return centroid.x() < x_interface ? Region::Stokes : Region::Darcy;
}

bool TwoRegionDomain::on_interface(const Point2& p, double tol) const {
  return std::abs(p.x() - x_interface) <= tol && p.y() >= y_min - tol && p.y() <= y_max + tol;
}

int Mesh::local_edge_index(Index t, Index e) const {
  const auto& tri = triangle(t);
  for (int i = 0; i < 3; ++i) {
    if (tri.edges[static_cast<std::size_t>(i)] == e) return i;
  }
  return -1;
}

std::array<Point2, 3> Mesh::corners(Index t) const {
  const auto& tri = triangle(t);
  return {vertex(tri.vertices[0]), vertex(tri.vertices[1]), vertex(tri.vertices[2])};
}

Point2 Mesh::centroid(Index t) const {
  const auto c = corners(t);
  return (c[0] + c[1] + c[2]) / 3.0;
}

Vec2 Mesh::outward_normal(Index t, int local_edge) const {
  const auto c = corners(t);
  const Point2& a = c[static_cast<std::size_t>((local_edge + 1) % 3)];
  const Point2& b = c[static_cast<std::size_t>((local_edge + 2) % 3)];
  const Vec2 d = b - a;
  return Vec2(d.y(), -d.x()).normalized();
}

namespace {

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

Mesh Mesh::from_triangles(std::vector<Point2> vertices,
                          std::vector<std::array<Index, 3>> triangles,
                          std::vector<Region> regions,
                          const TwoRegionDomain& domain) {
  domain.validate();
  if (triangles.size() != regions.size()) {
    throw MeshError("one region tag is required per triangle");
  }
  for (const auto& v : vertices) {
    if (!std::isfinite(v.x()) || !std::isfinite(v.y())) {
      throw MeshError("non-finite vertex coordinate");
    }
  }

  Mesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.domain_ = domain;
  mesh.triangles_.resize(triangles.size());

  const auto nv = static_cast<Index>(mesh.vertices_.size());
  std::map<std::pair<Index, Index>, Index> edge_lookup;

  for (std::size_t t = 0; t < triangles.size(); ++t) {
    auto ids = triangles[t];
    for (Index id : ids) {
      if (id < 0 || id >= nv) throw MeshError("triangle references an unknown vertex");
    }
    double area = signed_area(mesh.vertices_[static_cast<std::size_t>(ids[0])],
                              mesh.vertices_[static_cast<std::size_t>(ids[1])],
                              mesh.vertices_[static_cast<std::size_t>(ids[2])]);
    if (area < 0.0) {
      std::swap(ids[1], ids[2]);
      area = -area;
    }
    if (!(area > 0.0)) {
      throw MeshError("degenerate triangle " + std::to_string(t));
    }

    Triangle& tri = mesh.triangles_[t];
    tri.vertices = ids;
    tri.region = regions[t];
    tri.area = area;

    double perimeter = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Index a = ids[static_cast<std::size_t>((i + 1) % 3)];
      const Index b = ids[static_cast<std::size_t>((i + 2) % 3)];
      const Vec2 d = mesh.vertices_[static_cast<std::size_t>(b)] - mesh.vertices_[static_cast<std::size_t>(a)];
      const double len = d.norm();
      perimeter += len;
      tri.diameter = std::max(tri.diameter, len);

      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_lookup.try_emplace({key.first, key.second},
                                                     static_cast<Index>(mesh.edges_.size()));
      if (inserted) {
        Edge edge;
        edge.vertices = {a, b};
        edge.elements = {static_cast<Index>(t), kNoElement};
        edge.normal = Vec2(d.y(), -d.x()) / len;
        edge.midpoint = 0.5 * (mesh.vertices_[static_cast<std::size_t>(a)] +
                               mesh.vertices_[static_cast<std::size_t>(b)]);
        edge.length = len;
        mesh.edges_.push_back(edge);
      } else {
        Edge& edge = mesh.edges_[static_cast<std::size_t>(it->second)];
        if (edge.elements[1] != kNoElement) {
          throw MeshError("edge shared by more than two triangles");
        }
        edge.elements[1] = static_cast<Index>(t);
      }
      tri.edges[static_cast<std::size_t>(i)] = it->second;
    }
    tri.inradius = 2.0 * area / perimeter;
  }

  const auto stats = mesh_statistics(mesh);
  mesh.h_ = stats.h;
  mesh.sigma_h_ = stats.sigma_h;
  return classify_edges(std::move(mesh));
}

Mesh classify_edges(Mesh mesh) {
  const auto& dom = mesh.domain_;
  const double tol = 1e-12 * std::max(1.0, dom.x_max - dom.x_min);
  for (std::size_t e = 0; e < mesh.edges_.size(); ++e) {
    Edge& edge = mesh.edges_[e];
    const Region r0 = mesh.triangles_[static_cast<std::size_t>(edge.elements[0])].region;
    if (edge.is_boundary()) {
      edge.cls = r0 == Region::Stokes ? EdgeClass::GammaS : EdgeClass::GammaD;
      continue;
    }
    const Region r1 = mesh.triangles_[static_cast<std::size_t>(edge.elements[1])].region;
    if (r0 == r1) {
      edge.cls = r0 == Region::Stokes ? EdgeClass::InteriorStokes : EdgeClass::InteriorDarcy;
      continue;
    }
    const bool on_interface = dom.on_interface(mesh.vertex(edge.vertices[0]), tol) &&
                              dom.on_interface(mesh.vertex(edge.vertices[1]), tol);
    if (!on_interface) {
      throw MeshError("edge " + std::to_string(e) +
                      " separates Stokes and Darcy elements away from the interface");
    }
    edge.cls = EdgeClass::InterfaceI;
  }
  return mesh;
}

MeshStatistics mesh_statistics(const Mesh& mesh) {
  MeshStatistics stats;
  for (const auto& tri : mesh.triangles()) {
    stats.h = std::max(stats.h, tri.diameter);
    stats.sigma_h = std::max(stats.sigma_h, tri.diameter / (2.0 * tri.inradius));
  }
  return stats;
}

Mesh build_structured_mesh(int n, const TwoRegionDomain& domain) {
  if (n < 1) throw MeshError("mesh resolution n must be >= 1");
  domain.validate();

  const int nx = 2 * n;
  const int ny = n;
  const double dx_s = (domain.x_interface - domain.x_min) / n;
  const double dx_d = (domain.x_max - domain.x_interface) / n;
  const double dy = (domain.y_max - domain.y_min) / ny;

  std::vector<Point2> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    const double y = j == ny ? domain.y_max : domain.y_min + j * dy;
    for (int i = 0; i <= nx; ++i) {
      double x = 0.0;
      if (i < n) {
        x = domain.x_min + i * dx_s;
      } else if (i == n) {
        x = domain.x_interface;
      } else if (i == nx) {
        x = domain.x_max;
      } else {
        x = domain.x_interface + (i - n) * dx_d;
      }
      vertices.emplace_back(x, y);
    }
  }

  const auto vid = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
  std::vector<std::array<Index, 3>> triangles;
  std::vector<Region> regions;
  triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Index v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      const Region region = i < n ? Region::Stokes : Region::Darcy;
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
      regions.push_back(region);
      regions.push_back(region);
    }
  }
  return Mesh::from_triangles(std::move(vertices), std::move(triangles), std::move(regions), domain);
}

}  // namespace sdcr
