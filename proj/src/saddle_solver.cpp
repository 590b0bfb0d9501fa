#include "sdcr/saddle_solver.hpp"

#include <cmath>
#include <limits>
#include <regex>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

namespace sdcr {

SparseMatrix augmented_matrix(const SystemBlocks& blocks) {
  const Index nv = static_cast<Index>(blocks.A.rows());
  const Index np = static_cast<Index>(blocks.B.rows());
  const Index n = nv + np + 1;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(blocks.A.nonZeros() + 2 * blocks.B.nonZeros() + 2 * np));
  for (int k = 0; k < blocks.A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(blocks.A, k); it; ++it) {
      triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int k = 0; k < blocks.B.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(blocks.B, k); it; ++it) {
      triplets.emplace_back(nv + it.row(), it.col(), it.value());
      triplets.emplace_back(it.col(), nv + it.row(), it.value());
    }
  }
  for (Index t = 0; t < np; ++t) {
    triplets.emplace_back(nv + t, n - 1, blocks.cell_areas[t]);
    triplets.emplace_back(n - 1, nv + t, blocks.cell_areas[t]);
  }
  SparseMatrix K(n, n);
  K.setFromTriplets(triplets.begin(), triplets.end());
  return K;
}

namespace {

Eigen::VectorXd augmented_rhs(const SystemBlocks& blocks) {
  const auto nv = blocks.A.rows();
  const auto np = blocks.B.rows();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv + np + 1);
  rhs.head(nv) = blocks.F;
  rhs.segment(nv, np) = blocks.G;
  return rhs;
}

Eigen::VectorXd saddle_preconditioner(const SystemBlocks& blocks) {
  const auto nv = blocks.A.rows();
  const auto np = blocks.B.rows();
  Eigen::VectorXd diag(nv + np + 1);
  const Eigen::VectorXd adiag = blocks.A.diagonal();
  for (Eigen::Index i = 0; i < nv; ++i) diag[i] = adiag[i] > 0.0 ? adiag[i] : 1.0;
  // Diagonal of B diag(A)^-1 B^T as the pressure block.
  Eigen::VectorXd schur = Eigen::VectorXd::Zero(np);
  for (int k = 0; k < blocks.B.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(blocks.B, k); it; ++it) {
      schur[it.row()] += it.value() * it.value() / diag[it.col()];
    }
  }
  double multiplier = 0.0;
  for (Eigen::Index t = 0; t < np; ++t) {
    if (!(schur[t] > 0.0)) schur[t] = blocks.cell_areas[t];
    multiplier += blocks.cell_areas[t] * blocks.cell_areas[t] / schur[t];
  }
  diag.segment(nv, np) = schur;
  diag[nv + np] = multiplier > 0.0 ? multiplier : 1.0;
  return diag;
}

SaddleSolution unpack(const SystemBlocks& blocks, const Eigen::VectorXd& x) {
  const auto nv = blocks.A.rows();
  const auto np = blocks.B.rows();
  SaddleSolution sol;
  sol.u.coefficients = x.head(nv);
  sol.p.cell_values = x.segment(nv, np);
  const Eigen::VectorXd mom = blocks.A * sol.u.coefficients + blocks.B.transpose() * sol.p.cell_values - blocks.F;
  const Eigen::VectorXd mass = blocks.B * sol.u.coefficients - blocks.G;
  sol.residuals.momentum = mom.norm() / std::max(1.0, blocks.F.norm());
  sol.residuals.mass = mass.norm() / std::max(1.0, blocks.G.norm());
  sol.residuals.mean_pressure = std::abs(blocks.cell_areas.dot(sol.p.cell_values));
  return sol;
}

bool acceptable(const SaddleSolution& sol, double tol) {
  return sol.u.coefficients.allFinite() && sol.p.cell_values.allFinite() &&
         sol.residuals.momentum <= tol && sol.residuals.mass <= tol;
}

std::optional<Index> parse_pivot(const std::string& message) {
  static const std::regex trailing_number(R"((\d+)\s*$)");
  std::smatch m;
  if (std::regex_search(message, m, trailing_number)) return static_cast<Index>(std::stol(m[1].str()));
  return std::nullopt;
}

SaddleSolution solve_minres(const SystemBlocks& blocks, const SparseMatrix& K, const SolverOptions& options) {
  const auto n = K.rows();
  const int max_it = options.max_iterations > 0 ? options.max_iterations : static_cast<int>(20 * (n - 1));
  const auto result = minres(K, augmented_rhs(blocks), saddle_preconditioner(blocks), options.minres_tol, max_it);
  SaddleSolution sol = unpack(blocks, result.x);
  sol.method = SaddleMethod::Minres;
  sol.iterations = result.iterations;
  if (!acceptable(sol, options.residual_tol)) {
    throw SolverError("MINRES did not converge after " + std::to_string(result.iterations) +
                          " iterations (relative residual " + std::to_string(result.relative_residual) + ")",
                      std::nullopt, result.iterations, result.relative_residual);
  }
  return sol;
}

}  // namespace

SaddleSolution solve_saddle(const SystemBlocks& blocks, const SolverOptions& options) {
  const SparseMatrix K = augmented_matrix(blocks);
  if (options.method == SaddleMethod::Minres) return solve_minres(blocks, K, options);

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) {
    const std::string message = lu.lastErrorMessage();
    throw SolverError("saddle system is singular beyond the pressure constant: " + message,
                      parse_pivot(message));
  }
  const Eigen::VectorXd x = lu.solve(augmented_rhs(blocks));
  SaddleSolution sol = unpack(blocks, x);
  sol.method = SaddleMethod::Direct;
  if (acceptable(sol, options.residual_tol)) return sol;
  if (!options.allow_fallback) {
    throw SolverError("direct solve residual above tolerance", std::nullopt, std::nullopt,
                      std::max(sol.residuals.momentum, sol.residuals.mass));
  }
  return solve_minres(blocks, K, options);
}

MinresResult minres(const SparseMatrix& K, const Eigen::VectorXd& rhs, const Eigen::VectorXd& precond_diag,
                    double tol, int max_iterations) {
  const auto n = K.rows();
  MinresResult out;
  out.x = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd inv_diag = precond_diag.cwiseInverse();
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    out.converged = true;
    return out;
  }

  Eigen::VectorXd r1 = rhs;
  Eigen::VectorXd y = inv_diag.cwiseProduct(r1);
  const double beta1 = std::sqrt(r1.dot(y));
  Eigen::VectorXd r2 = r1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w1 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);
  double oldb = 0.0;
  double beta = beta1;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;
  constexpr double tiny = std::numeric_limits<double>::min();

  for (int it = 1; it <= max_iterations; ++it) {
    const Eigen::VectorXd v = y / beta;
    y = K * v;
    if (it >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = inv_diag.cwiseProduct(r2);
    oldb = beta;
    beta = std::sqrt(std::max(0.0, r2.dot(y)));
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    out.x += phi * w;
    out.iterations = it;

    if (phibar <= tol * beta1 || beta == 0.0) {
      out.relative_residual = (rhs - K * out.x).norm() / rhs_norm;
      if (out.relative_residual <= tol) {
        out.converged = true;
        return out;
      }
      if (beta == 0.0) break;
    }
  }
  out.relative_residual = (rhs - K * out.x).norm() / rhs_norm;
  out.converged = out.relative_residual <= tol;
  return out;
}

}  // namespace sdcr
