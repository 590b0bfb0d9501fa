#include "sdcr/assembly.hpp"

#include <cmath>
#include <iostream>

#include <Eigen/Eigenvalues>

#include "sdcr/quadrature.hpp"

namespace sdcr {

void MaterialParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw AssemblyError("viscosity mu must be positive");
  if (!(alpha1 > 0.0) || !std::isfinite(alpha1)) throw AssemblyError("alpha1 must be positive");
  if (!K.allFinite() || std::abs(K(0, 1) - K(1, 0)) > 1e-14 * K.cwiseAbs().maxCoeff()) {
    throw AssemblyError("permeability K must be symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Mat2> eig(K);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw AssemblyError("permeability K must be positive definite");
  }
  if (penalty_stokes_weight && !(*penalty_stokes_weight > 0.0)) {
    throw AssemblyError("Stokes penalty weight must be positive");
  }
}

double MaterialParams::bjs_coefficient(const Vec2& tau) const {
  return mu * alpha1 / std::sqrt(kappa(tau));
}

namespace {

using Local6 = Eigen::Matrix<double, 6, 6>;
using Local12 = Eigen::Matrix<double, 12, 12>;
using DofList6 = std::array<Index, 6>;
using DofList12 = std::array<Index, 12>;

// Coefficients of a bilinear form of the a~_h / norm family.
struct FormTerms {
  bool symmetric_gradient = true;
  double stokes_coeff = 2.0;
  Mat2 darcy_mass = Mat2::Identity();
  double darcy_div = 1.0;
  std::function<double(const Vec2&)> interface_coeff;
};

FormTerms stiffness_terms(const MaterialParams& params) {
  FormTerms terms;
  terms.symmetric_gradient = true;
  terms.stokes_coeff = 2.0 * params.mu;
  terms.darcy_mass = params.mu * params.K.inverse();
  terms.darcy_div = 1.0;
  terms.interface_coeff = [params](const Vec2& tau) { return params.bjs_coefficient(tau); };
  return terms;
}

FormTerms norm_terms() {
  FormTerms terms;
  terms.symmetric_gradient = false;
  terms.stokes_coeff = 1.0;
  terms.darcy_mass = Mat2::Identity();
  terms.darcy_div = 1.0;
  terms.interface_coeff = [](const Vec2&) { return 1.0; };
  return terms;
}

Local6 element_matrix(const Mesh& mesh, const DofMap& dofs, Index t, const FormTerms& terms) {
  const Triangle& tri = mesh.triangle(t);
  const ElementBasis basis(mesh, dofs, t);
  Local6 local = Local6::Zero();
  if (tri.region == Region::Stokes) {
    // Constant integrand: one-point rule.
    std::array<Mat2, 6> d;
    for (std::size_t k = 0; k < 6; ++k) {
      const Mat2& g = basis.gradients()[k];
      d[k] = terms.symmetric_gradient ? Mat2(0.5 * (g + g.transpose())) : g;
    }
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        local(a, b) = terms.stokes_coeff * tri.area *
                      d[static_cast<std::size_t>(a)].cwiseProduct(d[static_cast<std::size_t>(b)]).sum();
      }
    }
    return local;
  }
  // Darcy: quadratic mass integrand via the edge-midpoint rule, constant div-div.
  for (const auto& q : triangle_midpoint_rule()) {
    const auto phi = basis.values(map_to_triangle(basis.corners(), q.xi, q.eta));
    for (int a = 0; a < 6; ++a) {
      const Vec2 ma = terms.darcy_mass * phi[static_cast<std::size_t>(a)];
      for (int b = 0; b < 6; ++b) {
        local(a, b) += q.weight * tri.area * ma.dot(phi[static_cast<std::size_t>(b)]);
      }
    }
  }
  const auto& div = basis.divergences();
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      local(a, b) += terms.darcy_div * tri.area * div[static_cast<std::size_t>(a)] *
                     div[static_cast<std::size_t>(b)];
    }
  }
  return local;
}

Index stokes_side(const Mesh& mesh, const Edge& edge) {
  return mesh.triangle(edge.elements[0]).region == Region::Stokes ? edge.elements[0] : edge.elements[1];
}

// Tangential trace term on the Stokes side of an interface edge
// (quadratic integrand, two-point Gauss).
Local6 interface_matrix(const Mesh& mesh, const DofMap& dofs, Index e, const FormTerms& terms) {
  const Edge& edge = mesh.edge(e);
  const Index t = stokes_side(mesh, edge);
  const ElementBasis basis(mesh, dofs, t);
  const Vec2 tau = edge.tangent();
  const double coeff = terms.interface_coeff(tau);
  const Point2& a = mesh.vertex(edge.vertices[0]);
  const Point2& b = mesh.vertex(edge.vertices[1]);
  Local6 local = Local6::Zero();
  for (const auto& q : gauss_legendre(2)) {
    const auto phi = basis.values(a + q.t * (b - a));
    Eigen::Matrix<double, 6, 1> tr;
    for (std::size_t k = 0; k < 6; ++k) tr[static_cast<Eigen::Index>(k)] = phi[k].dot(tau);
    local += coeff * q.weight * edge.length * tr * tr.transpose();
  }
  return local;
}

Local12 jump_matrix(const Mesh& mesh, const DofMap& dofs, Index e, const MaterialParams& params) {
  const Edge& edge = mesh.edge(e);
  const PenaltyGroup group = penalty_group(edge.cls);
  double weight = 1.0 / edge.length;
  if (group == PenaltyGroup::StokesClosure) weight *= params.stokes_penalty();
  const bool normal_only = group == PenaltyGroup::DarcyBoundary;

  const ElementBasis side0(mesh, dofs, edge.elements[0]);
  std::optional<ElementBasis> side1;
  if (!edge.is_boundary()) side1.emplace(mesh, dofs, edge.elements[1]);

  const Point2& a = mesh.vertex(edge.vertices[0]);
  const Point2& b = mesh.vertex(edge.vertices[1]);
  Local12 local = Local12::Zero();
  for (const auto& q : gauss_legendre(2)) {
    const Point2 x = a + q.t * (b - a);
    // [phi] = phi|_{elements[1]} - phi|_{elements[0]}, and -phi on the boundary.
    Eigen::Matrix<double, 2, 12> jump = Eigen::Matrix<double, 2, 12>::Zero();
    const auto v0 = side0.values(x);
    for (int k = 0; k < 6; ++k) jump.col(k) = -v0[static_cast<std::size_t>(k)];
    if (side1) {
      const auto v1 = side1->values(x);
      for (int k = 0; k < 6; ++k) jump.col(6 + k) = v1[static_cast<std::size_t>(k)];
    }
    const double w = weight * q.weight * edge.length;
    if (normal_only) {
      const Eigen::Matrix<double, 1, 12> jn = edge.normal.transpose() * jump;
      local += w * jn.transpose() * jn;
    } else {
      local += w * jump.transpose() * jump;
    }
  }
  return local;
}

DofList12 edge_dofs(const Mesh& mesh, const DofMap& dofs, Index e) {
  const Edge& edge = mesh.edge(e);
  DofList12 out;
  out.fill(kConstrained);
  const auto& d0 = dofs.element_dofs(edge.elements[0]);
  std::copy(d0.begin(), d0.end(), out.begin());
  if (!edge.is_boundary()) {
    const auto& d1 = dofs.element_dofs(edge.elements[1]);
    std::copy(d1.begin(), d1.end(), out.begin() + 6);
  }
  return out;
}

template <class LocalMatrix, class DofList>
void scatter(const LocalMatrix& local, const DofList& ids, std::vector<Triplet>& out) {
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] == kConstrained) continue;
    for (std::size_t c = 0; c < ids.size(); ++c) {
      if (ids[c] == kConstrained) continue;
      const double v = local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (v != 0.0) out.emplace_back(ids[r], ids[c], v);
    }
  }
}

// Serial path: compute and scatter item by item. Parallel path: compute all
// local contributions concurrently, then scatter in item order so the
// triplet stream (and hence the summed matrix) is identical.
template <class LocalMatrix, class Compute, class DofsOf>
void assemble_items(const std::vector<Index>& items, Execution exec, Compute&& compute,
                    DofsOf&& dofs_of, std::vector<Triplet>& out) {
  if (exec == Execution::Serial) {
    for (Index item : items) scatter(compute(item), dofs_of(item), out);
    return;
  }
  std::vector<LocalMatrix, Eigen::aligned_allocator<LocalMatrix>> locals(items.size());
  const auto count = static_cast<std::ptrdiff_t>(items.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    locals[static_cast<std::size_t>(i)] = compute(items[static_cast<std::size_t>(i)]);
  }
  for (std::size_t i = 0; i < items.size(); ++i) scatter(locals[i], dofs_of(items[i]), out);
}

std::vector<Index> iota_items(Index count) {
  std::vector<Index> items(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) items[static_cast<std::size_t>(i)] = i;
  return items;
}

std::vector<Index> interface_edges(const Mesh& mesh) {
  std::vector<Index> out;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge(e).cls == EdgeClass::InterfaceI) out.push_back(e);
  }
  return out;
}

SparseMatrix assemble_form(const Mesh& mesh, const DofMap& dofs, const FormTerms& terms, Execution exec) {
  std::vector<Triplet> triplets;
  const auto element_ids = [&](Index t) -> const DofList6& { return dofs.element_dofs(t); };
  assemble_items<Local6>(
      iota_items(mesh.num_triangles()), exec,
      [&](Index t) { return element_matrix(mesh, dofs, t, terms); }, element_ids, triplets);

  assemble_items<Local6>(
      interface_edges(mesh), exec,
      [&](Index e) { return interface_matrix(mesh, dofs, e, terms); },
      [&](Index e) -> const DofList6& { return dofs.element_dofs(stokes_side(mesh, mesh.edge(e))); },
      triplets);

  SparseMatrix A(dofs.n_velocity(), dofs.n_velocity());
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                                Execution exec) {
  params.validate();
  return assemble_form(mesh, dofs, stiffness_terms(params), exec);
}

SparseMatrix assemble_jump_penalty(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                                   Execution exec) {
  params.validate();
  std::vector<Triplet> triplets;
  assemble_items<Local12>(
      iota_items(mesh.num_edges()), exec,
      [&](Index e) { return jump_matrix(mesh, dofs, e, params); },
      [&](Index e) { return edge_dofs(mesh, dofs, e); }, triplets);
  SparseMatrix J(dofs.n_velocity(), dofs.n_velocity());
  J.setFromTriplets(triplets.begin(), triplets.end());
  return J;
}

SparseMatrix assemble_norm_gram(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                                Execution exec) {
  SparseMatrix N = assemble_form(mesh, dofs, norm_terms(), exec);
  N += assemble_jump_penalty(mesh, dofs, params, exec);
  return N;
}

SparseMatrix assemble_divergence(const Mesh& mesh, const DofMap& dofs, Execution exec) {
  using Row6 = Eigen::Matrix<double, 1, 6>;
  const auto items = iota_items(mesh.num_triangles());
  const auto row_of = [&](Index t) {
    const ElementBasis basis(mesh, dofs, t);
    Row6 row;
    for (int k = 0; k < 6; ++k) {
      row[k] = -mesh.triangle(t).area * basis.divergences()[static_cast<std::size_t>(k)];
    }
    return row;
  };
  std::vector<Row6, Eigen::aligned_allocator<Row6>> rows(items.size());
  if (exec == Execution::Parallel) {
    const auto count = static_cast<std::ptrdiff_t>(items.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) rows[static_cast<std::size_t>(i)] = row_of(items[static_cast<std::size_t>(i)]);
  } else {
    for (std::size_t i = 0; i < items.size(); ++i) rows[i] = row_of(items[i]);
  }
  std::vector<Triplet> triplets;
  for (Index t : items) {
    const auto& ids = dofs.element_dofs(t);
    for (std::size_t k = 0; k < 6; ++k) {
      const double v = rows[static_cast<std::size_t>(t)][static_cast<Eigen::Index>(k)];
      if (ids[k] != kConstrained && v != 0.0) triplets.emplace_back(t, ids[k], v);
    }
  }
  SparseMatrix B(dofs.n_pressure(), dofs.n_velocity());
  B.setFromTriplets(triplets.begin(), triplets.end());
  return B;
}

RightHandSide assemble_rhs(const Mesh& mesh, const DofMap& dofs, const SourceData& source,
                           const AssemblyOptions& options) {
  RightHandSide rhs;
  rhs.F = Eigen::VectorXd::Zero(dofs.n_velocity());
  rhs.G = Eigen::VectorXd::Zero(dofs.n_pressure());
  const auto rule = triangle_rule(options.rhs_degree);

  struct LocalRhs {
    std::array<double, 6> f{};
    double g = 0.0;
  };
  const auto compute = [&](Index t) {
    const Triangle& tri = mesh.triangle(t);
    const ElementBasis basis(mesh, dofs, t);
    LocalRhs local;
    for (const auto& q : rule) {
      const Point2 x = map_to_triangle(basis.corners(), q.xi, q.eta);
      const double w = q.weight * tri.area;
      const auto phi = basis.values(x);
      const Vec2 f = source.f ? source.f(x, tri.region) : Vec2::Zero();
      const double g = source.g ? source.g(x, tri.region) : 0.0;
      for (std::size_t k = 0; k < 6; ++k) {
        local.f[k] += w * f.dot(phi[k]);
        if (tri.region == Region::Darcy) local.f[k] += w * g * basis.divergences()[k];
      }
      local.g -= w * g;
    }
    return local;
  };

  std::vector<LocalRhs> locals(static_cast<std::size_t>(mesh.num_triangles()));
  if (options.execution == Execution::Parallel) {
    const auto count = static_cast<std::ptrdiff_t>(mesh.num_triangles());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < count; ++t) locals[static_cast<std::size_t>(t)] = compute(static_cast<Index>(t));
  } else {
    for (Index t = 0; t < mesh.num_triangles(); ++t) locals[static_cast<std::size_t>(t)] = compute(t);
  }
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& local = locals[static_cast<std::size_t>(t)];
    const auto& ids = dofs.element_dofs(t);
    for (std::size_t k = 0; k < 6; ++k) {
      if (ids[k] != kConstrained) rhs.F[ids[k]] += local.f[k];
    }
    rhs.G[t] = local.g;
    rhs.g_integral -= local.g;
  }
  if (std::abs(rhs.g_integral) > options.compatibility_tol) {
    std::cerr << "warning: source g violates the compatibility condition, integral = "
              << rhs.g_integral << '\n';
  }
  return rhs;
}

Eigen::VectorXd cell_areas(const Mesh& mesh) {
  Eigen::VectorXd areas(mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) areas[t] = mesh.triangle(t).area;
  return areas;
}

SystemBlocks assemble_system(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                             const SourceData& source, const AssemblyOptions& options) {
  SystemBlocks blocks;
  blocks.stiffness = assemble_stiffness(mesh, dofs, params, options.execution);
  blocks.penalty = assemble_jump_penalty(mesh, dofs, params, options.execution);
  blocks.A = blocks.stiffness + blocks.penalty;
  blocks.B = assemble_divergence(mesh, dofs, options.execution);
  auto rhs = assemble_rhs(mesh, dofs, source, options);
  blocks.F = std::move(rhs.F);
  blocks.G = std::move(rhs.G);
  blocks.cell_areas = cell_areas(mesh);
  return blocks;
}

double symmetry_defect(const SparseMatrix& A) {
  const SparseMatrix At = A.transpose();
  const SparseMatrix D = A - At;
  double dmax = 0.0;
  double amax = 0.0;
  for (int k = 0; k < D.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(D, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  }
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) amax = std::max(amax, std::abs(it.value()));
  }
  return dmax / std::max(1.0, amax);
}

}  // namespace sdcr
