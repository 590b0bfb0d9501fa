#include "sdcr/verification.hpp"

#include <cmath>
#include <stdexcept>

#include "sdcr/quadrature.hpp"

namespace sdcr {

ReferenceSolution reference_from(const ExactCase& exact, const Mesh& mesh) {
  const auto region = [&mesh](Index t) { return mesh.triangle(t).region; };
  return {[&exact, region](const Point2& x, Index t) { return exact.u(x, region(t)); },
          [&exact, region](const Point2& x, Index t) { return exact.grad_u(x, region(t)); },
          [&exact, region](const Point2& x, Index t) { return exact.p(x, region(t)); }};
}

ReferenceSolution reference_from(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u,
                                 const DiscretePressure& p) {
  return {[&mesh, &dofs, &u](const Point2& x, Index t) { return eval_velocity(mesh, dofs, u, t, x); },
          [&mesh, &dofs, &u](const Point2&, Index t) { return velocity_gradient(mesh, dofs, u, t); },
          [&p](const Point2&, Index t) { return p.cell_values[t]; }};
}

namespace {

struct CellErrors {
  double h1 = 0.0;
  double l2 = 0.0;
  double div = 0.0;
  double p = 0.0;
};

struct EdgeErrors {
  double tangential = 0.0;
  double jump = 0.0;
};

Vec2 discrete_value(const ElementBasis& basis, const std::array<double, 6>& c, const Point2& x) {
  const auto v = basis.values(x);
  Vec2 out = Vec2::Zero();
  for (std::size_t k = 0; k < 6; ++k) out += c[k] * v[k];
  return out;
}

template <class Item, class Compute>
std::vector<Item> compute_all(Index count, Execution exec, Compute&& compute) {
  std::vector<Item> out(static_cast<std::size_t>(count));
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = compute(i);
  } else {
    for (Index i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = compute(i);
  }
  return out;
}

}  // namespace

ErrorReport compute_error_norms(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                                const DiscreteVelocity& u_h, const DiscretePressure& p_h,
                                const ReferenceSolution& reference, const ErrorOptions& options) {
  const auto rule = triangle_rule(options.volume_degree);
  const auto line = gauss_legendre(options.edge_points);

  const auto cells = compute_all<CellErrors>(mesh.num_triangles(), options.execution, [&](Index t) {
    const Triangle& tri = mesh.triangle(t);
    const ElementBasis basis(mesh, dofs, t);
    const auto c = local_coefficients(dofs, u_h, t);
    const Mat2 grad_h = velocity_gradient(mesh, dofs, u_h, t);
    const auto& corners = basis.corners();
    CellErrors out;
    for (const auto& q : rule) {
      const Point2 x = map_to_triangle(corners, q.xi, q.eta);
      const double w = q.weight * tri.area;
      const double ep = reference.p(x, t) - p_h.cell_values[t];
      out.p += w * ep * ep;
      const Mat2 eg = reference.grad_u(x, t) - grad_h;
      if (tri.region == Region::Stokes) {
        out.h1 += w * eg.squaredNorm();
      } else {
        const Vec2 e = reference.u(x, t) - discrete_value(basis, c, x);
        out.l2 += w * e.squaredNorm();
        out.div += w * eg.trace() * eg.trace();
      }
    }
    return out;
  });

  const auto edges = compute_all<EdgeErrors>(mesh.num_edges(), options.execution, [&](Index e) {
    const Edge& edge = mesh.edge(e);
    const PenaltyGroup group = penalty_group(edge.cls);
    double weight = 1.0 / edge.length;
    if (group == PenaltyGroup::StokesClosure) weight *= params.stokes_penalty();
    const Point2& a = mesh.vertex(edge.vertices[0]);
    const Point2& b = mesh.vertex(edge.vertices[1]);
    const auto error_at = [&](Index t, const Point2& x) {
      return Vec2(reference.u(x, t) - eval_velocity(mesh, dofs, u_h, t, x));
    };
    Index stokes_side = kNoElement;
    if (edge.cls == EdgeClass::InterfaceI) {
      stokes_side = mesh.triangle(edge.elements[0]).region == Region::Stokes ? edge.elements[0] : edge.elements[1];
    }
    const Vec2 tau = edge.tangent();
    EdgeErrors out;
    for (const auto& q : line) {
      const Point2 x = a + q.t * (b - a);
      const double w = q.weight * edge.length;
      Vec2 jump = -error_at(edge.elements[0], x);
      if (!edge.is_boundary()) jump += error_at(edge.elements[1], x);
      const double j2 = group == PenaltyGroup::DarcyBoundary ? std::pow(edge.normal.dot(jump), 2) : jump.squaredNorm();
      out.jump += weight * w * j2;
      if (stokes_side != kNoElement) out.tangential += w * std::pow(tau.dot(error_at(stokes_side, x)), 2);
    }
    return out;
  });

  CellErrors cell_sum;
  for (const auto& c : cells) {
    cell_sum.h1 += c.h1;
    cell_sum.l2 += c.l2;
    cell_sum.div += c.div;
    cell_sum.p += c.p;
  }
  EdgeErrors edge_sum;
  for (const auto& e : edges) {
    edge_sum.tangential += e.tangential;
    edge_sum.jump += e.jump;
  }

  ErrorReport report;
  report.components.broken_H1_stokes = std::sqrt(cell_sum.h1);
  report.components.interface_tangential = std::sqrt(edge_sum.tangential);
  report.components.L2_darcy = std::sqrt(cell_sum.l2);
  report.components.div_darcy = std::sqrt(cell_sum.div);
  report.components.jump_J = std::sqrt(edge_sum.jump);
  report.err_u_h = std::sqrt(cell_sum.h1 + edge_sum.tangential + cell_sum.l2 + cell_sum.div + edge_sum.jump);
  report.err_p = std::sqrt(cell_sum.p);
  report.h = mesh.h();
  return report;
}

ErrorReport compute_error_norms(const Mesh& mesh, const DofMap& dofs, const SaddleSolution& solution,
                                const ExactCase& exact, const ErrorOptions& options) {
  return compute_error_norms(mesh, dofs, exact.params(), solution.u, solution.p, reference_from(exact, mesh),
                             options);
}

DiscretePressure pressure_projection(const Mesh& mesh, const std::function<double(const Point2&, Index)>& p,
                                     int degree) {
  const auto rule = triangle_rule(degree);
  DiscretePressure out;
  out.cell_values = Eigen::VectorXd::Zero(mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto corners = mesh.corners(t);
    double mean = 0.0;
    for (const auto& q : rule) mean += q.weight * p(map_to_triangle(corners, q.xi, q.eta), t);
    out.cell_values[t] = mean;
  }
  return out;
}

ErrorReport interpolation_error(const Mesh& mesh, const DofMap& dofs, const ExactCase& exact,
                                const ErrorOptions& options) {
  const ReferenceSolution ref = reference_from(exact, mesh);
  // Three points integrate the degree-5 exact velocity exactly on each edge.
  const DiscreteVelocity ru = cr_interpolate(mesh, dofs, ref.u, 3);
  const DiscretePressure pp = pressure_projection(mesh, ref.p, options.volume_degree);
  return compute_error_norms(mesh, dofs, exact.params(), ru, pp, ref, options);
}

double max_interface_flux_jump(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u_h) {
  double worst = 0.0;
  for (const Edge& edge : mesh.edges()) {
    if (edge.cls != EdgeClass::InterfaceI) continue;
    // Traces are linear along the edge, so their mean is the midpoint value.
    const Vec2 u0 = eval_velocity(mesh, dofs, u_h, edge.elements[0], edge.midpoint);
    const Vec2 u1 = eval_velocity(mesh, dofs, u_h, edge.elements[1], edge.midpoint);
    worst = std::max(worst, std::abs(edge.normal.dot(u1 - u0)));
  }
  return worst;
}

double observed_order(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(h_coarse > 0.0) || !(h_fine > 0.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

void validate_levels(const std::vector<int>& levels, bool require_doubling) {
  if (levels.empty()) throw std::invalid_argument("levels must be nonempty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw std::invalid_argument("levels must be positive, got " + std::to_string(levels[i]));
    if (i > 0 && levels[i] <= levels[i - 1]) throw std::invalid_argument("levels must be strictly increasing");
    if (require_doubling && i > 0 && levels[i] != 2 * levels[i - 1]) {
      throw std::invalid_argument("levels must double: " + std::to_string(levels[i - 1]) + " -> " +
                                  std::to_string(levels[i]));
    }
  }
}

ConvergenceRow run_level(int n, const MaterialParams& params, const StudyOptions& options) {
  try {
    const Mesh mesh = build_structured_mesh(n);
    const DofMap dofs = build_dof_map(mesh);
    const ExactCase exact = manufactured_case(params, mesh.domain());
    AssemblyOptions aopts;
    aopts.execution = options.execution;
    aopts.rhs_degree = options.quadrature_degree;
    const SystemBlocks blocks = assemble_system(mesh, dofs, params, exact.source(), aopts);
    const SaddleSolution sol = solve_saddle(blocks, options.solver);

    ErrorOptions eopts;
    eopts.execution = options.execution;
    eopts.volume_degree = options.quadrature_degree;

    ConvergenceRow row;
    row.error = compute_error_norms(mesh, dofs, sol, exact, eopts);
    row.error.n = n;
    row.interpolation = interpolation_error(mesh, dofs, exact, eopts);
    row.interpolation.n = n;
    row.mass_residual = (blocks.B * sol.u.coefficients - blocks.G).norm();
    row.interface_flux = max_interface_flux_jump(mesh, dofs, sol.u);
    row.jump_J = sol.u.coefficients.dot(blocks.penalty * sol.u.coefficients);
    row.n_velocity = dofs.n_velocity();
    row.n_pressure = dofs.n_pressure();
    row.method = sol.method;
    if (dofs.n_velocity() <= options.spectral_max_velocity_dofs) {
      const SparseMatrix N = assemble_norm_gram(mesh, dofs, params, options.execution);
      row.alpha_h = estimate_coercivity(blocks.A, N, options.spectral);
      row.beta_h = estimate_inf_sup(blocks.B, N, blocks.cell_areas, options.spectral);
    }
    return row;
  } catch (const StudyError&) {
    throw;
  } catch (const std::exception& ex) {
    throw StudyError(n, ex.what());
  }
}

ConvergenceTable run_convergence_study(const std::vector<int>& levels, const MaterialParams& params,
                                       const StudyOptions& options) {
  validate_levels(levels, true);
  ConvergenceTable table;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int n : levels) {
    table.rows.push_back(run_level(n, params, options));
    const std::size_t i = table.rows.size() - 1;
    if (i == 0) {
      for (auto* v : {&table.eoc_u, &table.eoc_p, &table.eoc_J, &table.eoc_interpolation,
                      &table.eoc_pressure_projection}) {
        v->push_back(nan);
      }
      continue;
    }
    const ConvergenceRow& c = table.rows[i - 1];
    const ConvergenceRow& f = table.rows[i];
    const double hc = c.error.h;
    const double hf = f.error.h;
    table.eoc_u.push_back(observed_order(c.error.err_u_h, f.error.err_u_h, hc, hf));
    table.eoc_p.push_back(observed_order(c.error.err_p, f.error.err_p, hc, hf));
    table.eoc_J.push_back(observed_order(c.jump_J, f.jump_J, hc, hf));
    table.eoc_interpolation.push_back(observed_order(c.interpolation.err_u_h, f.interpolation.err_u_h, hc, hf));
    table.eoc_pressure_projection.push_back(observed_order(c.interpolation.err_p, f.interpolation.err_p, hc, hf));
  }
  return table;
}

}  // namespace sdcr
