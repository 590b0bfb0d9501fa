#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "sdcr/mesh.hpp"

namespace sdcr {

inline constexpr Index kConstrained = -1;

enum class DofKind : std::uint8_t {
  SharedVector,     // one Cartesian component of a full midpoint vector
  SharedNormal,     // normal component, shared by both sides of the edge
  TangentialLocal,  // tangential component owned by a single element
};

struct VelocityDof {
  DofKind kind = DofKind::SharedVector;
  Index edge = 0;
  int component = 0;           // SharedVector: 0 = x, 1 = y
  Index element = kNoElement;  // TangentialLocal: owning element
  Index global_index = 0;
};

// Velocity unknowns of the CR-type space with full-vector midpoint
// continuity on Stokes edges and normal-only continuity on Darcy and
// interface edges.
//
// Each element has six local scalars: for local edge i, the two
// coordinates of its midpoint vector in the frame `frame(t, i)`
// (local scalar 2*i + c uses column c). Stokes-type edges use the
// Cartesian frame; all other edges use (n_E, tau_E).
class DofMap {
 public:
  Index n_velocity() const { return n_velocity_; }
  Index n_pressure() const { return n_pressure_; }
  const std::vector<VelocityDof>& velocity_dofs() const { return dofs_; }

  // Global index of local scalar k = 2*i + c on element t, or kConstrained.
  Index global(Index t, int k) const {
    return element_dofs_[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  }
  const std::array<Index, 6>& element_dofs(Index t) const {
    return element_dofs_[static_cast<std::size_t>(t)];
  }
  const Mat2& frame(Index t, int local_edge) const {
    return frames_[static_cast<std::size_t>(3 * t + local_edge)];
  }

 private:
  friend DofMap build_dof_map(const Mesh& mesh);

  Index n_velocity_ = 0;
  Index n_pressure_ = 0;
  std::vector<VelocityDof> dofs_;
  std::vector<std::array<Index, 6>> element_dofs_;
  std::vector<Mat2> frames_;
};

// Numbering: edges in index order; within an edge the normal DOF precedes
// the tangential ones (in adjacency order), component 0 precedes 1.
DofMap build_dof_map(const Mesh& mesh);

// --- local P1 nonconforming basis --------------------------------------

// Barycentric coordinates of p in the triangle with the given corners.
std::array<double, 3> barycentric(const std::array<Point2, 3>& c, const Point2& p);
std::array<Vec2, 3> barycentric_gradients(const std::array<Point2, 3>& c);

// psi_i = 1 - 2 lambda_i: one on the midpoint of edge i (opposite vertex i),
// zero on the other midpoints.
std::array<double, 3> cr_shape_values(const std::array<Point2, 3>& c, const Point2& p);
std::array<Vec2, 3> cr_shape_gradients(const std::array<Point2, 3>& c);

// Closed forms on the reference triangle (0,0), (1,0), (0,1):
// 1 - 2y, -1 + 2x + 2y, 1 - 2x, associated with the edges y = 0,
// the hypotenuse, and x = 0 respectively.
std::array<double, 3> reference_cr_shape_values(double x, double y);

// The six vector-valued local basis functions of element t.
class ElementBasis {
 public:
  ElementBasis(const Mesh& mesh, const DofMap& dofs, Index t);

  std::array<Vec2, 6> values(const Point2& p) const;
  // Jacobian of local function k: J(r, s) = d phi_r / d x_s (constant).
  const std::array<Mat2, 6>& gradients() const { return grads_; }
  const std::array<double, 6>& divergences() const { return divs_; }
  const std::array<Point2, 3>& corners() const { return corners_; }

 private:
  std::array<Point2, 3> corners_;
  std::array<Mat2, 3> frames_;
  std::array<Mat2, 6> grads_;
  std::array<double, 6> divs_;
};

// --- discrete fields ----------------------------------------------------

struct DiscreteVelocity {
  Eigen::VectorXd coefficients;
};

struct DiscretePressure {
  Eigen::VectorXd cell_values;
};

// Smooth vector field, evaluated from the side of the given element.
using VectorField = std::function<Vec2(const Point2&, Index element)>;

// Local coefficients (constrained scalars read as zero).
std::array<double, 6> local_coefficients(const DofMap& dofs, const DiscreteVelocity& u, Index t);

// Midpoint vector of local edge i of element t.
Vec2 midpoint_value(const DofMap& dofs, const DiscreteVelocity& u, Index t, int local_edge);

Vec2 eval_velocity(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u,
                   Index element, const Point2& p);

// Constant gradient of u restricted to element t.
Mat2 velocity_gradient(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u, Index t);

// CR interpolant: every DOF receives the matching component of the edge
// mean of v, taken from the side of the owning element. Edge means use
// Gauss-Legendre with `gauss_points` nodes.
DiscreteVelocity cr_interpolate(const Mesh& mesh, const DofMap& dofs, const VectorField& v,
                                int gauss_points = 2);

// Per-element divergence of the piecewise linear field.
Eigen::VectorXd discrete_divergence(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u);

}  // namespace sdcr
