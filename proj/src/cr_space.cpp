#include "sdcr/cr_space.hpp"

#include <stdexcept>

#include "sdcr/quadrature.hpp"

namespace sdcr {

namespace {

Mat2 normal_tangent_frame(const Edge& edge) {
  Mat2 frame;
  frame.col(0) = edge.normal;
  frame.col(1) = edge.tangent();
  return frame;
}

bool is_stokes_vector_edge(EdgeClass cls) {
  return cls == EdgeClass::InteriorStokes || cls == EdgeClass::GammaS;
}

}  // namespace

DofMap build_dof_map(const Mesh& mesh) {
  DofMap map;
  map.n_pressure_ = mesh.num_triangles();
  map.element_dofs_.assign(static_cast<std::size_t>(mesh.num_triangles()),
                           {kConstrained, kConstrained, kConstrained, kConstrained, kConstrained,
                            kConstrained});
  map.frames_.assign(static_cast<std::size_t>(3 * mesh.num_triangles()), Mat2::Identity());

  Index next = 0;
  const auto add = [&](VelocityDof dof) {
    dof.global_index = next++;
    map.dofs_.push_back(dof);
    return dof.global_index;
  };
  const auto set_local = [&](Index t, Index e, Index first, Index second, const Mat2& frame) {
    const int i = mesh.local_edge_index(t, e);
    auto& slots = map.element_dofs_[static_cast<std::size_t>(t)];
    slots[static_cast<std::size_t>(2 * i)] = first;
    slots[static_cast<std::size_t>(2 * i + 1)] = second;
    map.frames_[static_cast<std::size_t>(3 * t + i)] = frame;
  };

  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const Index t0 = edge.elements[0];
    const Index t1 = edge.elements[1];

    if (is_stokes_vector_edge(edge.cls)) {
      if (edge.cls == EdgeClass::GammaS) {
        set_local(t0, e, kConstrained, kConstrained, Mat2::Identity());
        continue;
      }
      const Index gx = add({DofKind::SharedVector, e, 0, kNoElement, 0});
      const Index gy = add({DofKind::SharedVector, e, 1, kNoElement, 0});
      set_local(t0, e, gx, gy, Mat2::Identity());
      set_local(t1, e, gx, gy, Mat2::Identity());
      continue;
    }

    const Mat2 frame = normal_tangent_frame(edge);
    if (edge.cls == EdgeClass::GammaD) {
      const Index gt = add({DofKind::TangentialLocal, e, 0, t0, 0});
      set_local(t0, e, kConstrained, gt, frame);
      continue;
    }
    // InteriorDarcy and InterfaceI
    const Index gn = add({DofKind::SharedNormal, e, 0, kNoElement, 0});
    const Index gt0 = add({DofKind::TangentialLocal, e, 0, t0, 0});
    const Index gt1 = add({DofKind::TangentialLocal, e, 0, t1, 0});
    set_local(t0, e, gn, gt0, frame);
    set_local(t1, e, gn, gt1, frame);
  }
  map.n_velocity_ = next;
  return map;
}

std::array<double, 3> barycentric(const std::array<Point2, 3>& c, const Point2& p) {
  const double det = (c[1].x() - c[0].x()) * (c[2].y() - c[0].y()) -
                     (c[2].x() - c[0].x()) * (c[1].y() - c[0].y());
  const double l1 = ((p.x() - c[0].x()) * (c[2].y() - c[0].y()) -
                     (c[2].x() - c[0].x()) * (p.y() - c[0].y())) / det;
  const double l2 = ((c[1].x() - c[0].x()) * (p.y() - c[0].y()) -
                     (p.x() - c[0].x()) * (c[1].y() - c[0].y())) / det;
  return {1.0 - l1 - l2, l1, l2};
}

std::array<Vec2, 3> barycentric_gradients(const std::array<Point2, 3>& c) {
  const double det = (c[1].x() - c[0].x()) * (c[2].y() - c[0].y()) -
                     (c[2].x() - c[0].x()) * (c[1].y() - c[0].y());
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Point2& a = c[static_cast<std::size_t>((i + 1) % 3)];
    const Point2& b = c[static_cast<std::size_t>((i + 2) % 3)];
    g[static_cast<std::size_t>(i)] = Vec2(a.y() - b.y(), b.x() - a.x()) / det;
  }
  return g;
}

std::array<double, 3> cr_shape_values(const std::array<Point2, 3>& c, const Point2& p) {
  const auto l = barycentric(c, p);
  return {1.0 - 2.0 * l[0], 1.0 - 2.0 * l[1], 1.0 - 2.0 * l[2]};
}

std::array<Vec2, 3> cr_shape_gradients(const std::array<Point2, 3>& c) {
  auto g = barycentric_gradients(c);
  for (auto& v : g) v *= -2.0;
  return g;
}

std::array<double, 3> reference_cr_shape_values(double x, double y) {
  return {1.0 - 2.0 * y, -1.0 + 2.0 * x + 2.0 * y, 1.0 - 2.0 * x};
}

ElementBasis::ElementBasis(const Mesh& mesh, const DofMap& dofs, Index t) : corners_(mesh.corners(t)) {
  const auto shape_grads = cr_shape_gradients(corners_);
  for (int i = 0; i < 3; ++i) {
    frames_[static_cast<std::size_t>(i)] = dofs.frame(t, i);
    for (int c = 0; c < 2; ++c) {
      const auto k = static_cast<std::size_t>(2 * i + c);
      grads_[k] = frames_[static_cast<std::size_t>(i)].col(c) *
                  shape_grads[static_cast<std::size_t>(i)].transpose();
      divs_[k] = grads_[k].trace();
    }
  }
}

std::array<Vec2, 6> ElementBasis::values(const Point2& p) const {
  const auto psi = cr_shape_values(corners_, p);
  std::array<Vec2, 6> out;
  for (int i = 0; i < 3; ++i) {
    for (int c = 0; c < 2; ++c) {
      out[static_cast<std::size_t>(2 * i + c)] =
          psi[static_cast<std::size_t>(i)] * frames_[static_cast<std::size_t>(i)].col(c);
    }
  }
  return out;
}

std::array<double, 6> local_coefficients(const DofMap& dofs, const DiscreteVelocity& u, Index t) {
  std::array<double, 6> out{};
  const auto& slots = dofs.element_dofs(t);
  for (std::size_t k = 0; k < 6; ++k) {
    out[k] = slots[k] == kConstrained ? 0.0 : u.coefficients[slots[k]];
  }
  return out;
}

Vec2 midpoint_value(const DofMap& dofs, const DiscreteVelocity& u, Index t, int local_edge) {
  const auto coeff = local_coefficients(dofs, u, t);
  const Mat2& frame = dofs.frame(t, local_edge);
  return coeff[static_cast<std::size_t>(2 * local_edge)] * frame.col(0) +
         coeff[static_cast<std::size_t>(2 * local_edge + 1)] * frame.col(1);
}

Vec2 eval_velocity(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u,
                   Index element, const Point2& p) {
  if (element < 0 || element >= mesh.num_triangles()) {
    throw std::out_of_range("eval_velocity: element id out of range");
  }
  const auto psi = cr_shape_values(mesh.corners(element), p);
  Vec2 value = Vec2::Zero();
  for (int i = 0; i < 3; ++i) {
    value += psi[static_cast<std::size_t>(i)] * midpoint_value(dofs, u, element, i);
  }
  return value;
}

Mat2 velocity_gradient(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u, Index t) {
  const auto grads = cr_shape_gradients(mesh.corners(t));
  Mat2 g = Mat2::Zero();
  for (int i = 0; i < 3; ++i) {
    g += midpoint_value(dofs, u, t, i) * grads[static_cast<std::size_t>(i)].transpose();
  }
  return g;
}

DiscreteVelocity cr_interpolate(const Mesh& mesh, const DofMap& dofs, const VectorField& v,
                                int gauss_points) {
  const auto rule = gauss_legendre(gauss_points);
  const auto edge_mean = [&](const Edge& edge, Index side) {
    const Point2& a = mesh.vertex(edge.vertices[0]);
    const Point2& b = mesh.vertex(edge.vertices[1]);
    Vec2 mean = Vec2::Zero();
    for (const auto& q : rule) mean += q.weight * v(a + q.t * (b - a), side);
    return mean;
  };

  DiscreteVelocity out{Eigen::VectorXd::Zero(dofs.n_velocity())};
  for (const auto& dof : dofs.velocity_dofs()) {
    const Edge& edge = mesh.edge(dof.edge);
    switch (dof.kind) {
      case DofKind::SharedVector:
        out.coefficients[dof.global_index] = edge_mean(edge, edge.elements[0])[dof.component];
        break;
      case DofKind::SharedNormal:
        out.coefficients[dof.global_index] = edge_mean(edge, edge.elements[0]).dot(edge.normal);
        break;
      case DofKind::TangentialLocal:
        out.coefficients[dof.global_index] = edge_mean(edge, dof.element).dot(edge.tangent());
        break;
    }
  }
  return out;
}

Eigen::VectorXd discrete_divergence(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u) {
  Eigen::VectorXd div(mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    div[t] = velocity_gradient(mesh, dofs, u, t).trace();
  }
  return div;
}

}  // namespace sdcr
