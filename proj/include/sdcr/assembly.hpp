#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sdcr/cr_space.hpp"
#include "sdcr/mesh.hpp"

namespace sdcr {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MaterialParams {
  double mu = 1.0;
  Mat2 K = Mat2::Identity();
  double alpha1 = 1.0;
  // Weight of the Stokes-closure jump penalty; defaults to 1 + 2 mu.
  std::optional<double> penalty_stokes_weight;

  // Throws AssemblyError unless mu, alpha1 > 0 and K is symmetric positive definite.
  void validate() const;
  double stokes_penalty() const { return penalty_stokes_weight.value_or(1.0 + 2.0 * mu); }
  // tau . K . tau for a unit tangent.
  double kappa(const Vec2& tau) const { return tau.dot(K * tau); }
  // Beavers-Joseph-Saffman slip coefficient mu alpha1 / sqrt(kappa).
  double bjs_coefficient(const Vec2& tau) const;
};

enum class Execution { Serial, Parallel };

struct SourceData {
  std::function<Vec2(const Point2&, Region)> f;
  std::function<double(const Point2&, Region)> g;
};

struct SystemBlocks {
  SparseMatrix A;          // stiffness + penalty, n_v x n_v
  SparseMatrix B;          // divergence, n_p x n_v
  Eigen::VectorXd F;       // n_v
  Eigen::VectorXd G;       // n_p
  SparseMatrix stiffness;  // the a~_h part of A
  SparseMatrix penalty;    // the J part of A
  Eigen::VectorXd cell_areas;
};

struct AssemblyOptions {
  Execution execution = Execution::Serial;
  int rhs_degree = 10;  // volume quadrature exactness for F and G
  double compatibility_tol = 1e-10;
};

// a~_h: 2 mu (D u, D v) on Stokes cells, BJS slip on the Stokes trace of
// interface edges, mu (K^-1 u, v) and (div u, div v) on Darcy cells.
SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                                Execution exec = Execution::Serial);

// Jump penalty J over the three edge groups, weights (1+2mu)/h_E, 1/h_E, 1/h_E.
SparseMatrix assemble_jump_penalty(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                                   Execution exec = Execution::Serial);

// b_h(v, q) = -(q, div_h v); rows are cells, columns velocity DOFs.
SparseMatrix assemble_divergence(const Mesh& mesh, const DofMap& dofs,
                                 Execution exec = Execution::Serial);

struct RightHandSide {
  Eigen::VectorXd F;
  Eigen::VectorXd G;
  double g_integral = 0.0;
};

// F_i = (f, phi_i) + (g, div_h phi_i)_{Darcy}, G_k = -(g, 1)_{T_k}.
// Warns on stderr when the integral of g exceeds the compatibility tolerance.
RightHandSide assemble_rhs(const Mesh& mesh, const DofMap& dofs, const SourceData& source,
                           const AssemblyOptions& options = {});

// Gram matrix of the broken norm ||.||_h: element H1 seminorm on Stokes
// cells, tangential trace on the interface, L2 and div on Darcy cells, J.
SparseMatrix assemble_norm_gram(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                                Execution exec = Execution::Serial);

SystemBlocks assemble_system(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                             const SourceData& source, const AssemblyOptions& options = {});

// Diagonal pressure mass matrix entries |T_k|.
Eigen::VectorXd cell_areas(const Mesh& mesh);

// max |A - A^T| / max(1, max |A|).
double symmetry_defect(const SparseMatrix& A);

}  // namespace sdcr
