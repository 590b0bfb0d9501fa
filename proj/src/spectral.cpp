#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "sdcr/saddle_solver.hpp"

namespace sdcr {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kNearZeroEigenvalue = 1e-10;

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix>;

void factor_spd(Ldlt& ldlt, const SparseMatrix& M, const char* what) {
  ldlt.compute(M);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
    throw SolverError(std::string(what) + " is not positive definite");
  }
}

MatrixXd random_block(Eigen::Index rows, int cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd X(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) X(i, j) = normal(rng);
  }
  return X;
}

MatrixXd orthonormal_columns(const MatrixXd& Y) {
  Eigen::HouseholderQR<MatrixXd> qr(Y);
  return qr.householderQ() * MatrixXd::Identity(Y.rows(), Y.cols());
}

// Subspace inverse iteration with Rayleigh-Ritz for the smallest eigenvalue
// of the pencil (S, M); `inverse` applies (S restricted)^-1 M.
template <class ApplyInverse, class ApplyS, class ApplyM>
double smallest_by_subspace_iteration(ApplyInverse&& inverse, ApplyS&& apply_s,
                                      ApplyM&& apply_m, MatrixXd X, const SpectralOptions& options) {
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iterations; ++it) {
    const MatrixXd Q = orthonormal_columns(inverse(X));
    MatrixXd Sr = Q.transpose() * apply_s(Q);
    MatrixXd Mr = Q.transpose() * apply_m(Q);
    Sr = 0.5 * (Sr + Sr.transpose()).eval();
    Mr = 0.5 * (Mr + Mr.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(Sr, Mr);
    const double lambda = ges.eigenvalues()[0];
    X = Q * ges.eigenvectors();
    if (std::abs(lambda - previous) <= options.iteration_tol * std::abs(lambda)) return lambda;
    previous = lambda;
  }
  return previous;
}

}  // namespace

double estimate_coercivity(const SparseMatrix& A, const SparseMatrix& norm_gram, const SpectralOptions& options) {
  const auto n = A.rows();
  if (n <= options.dense_max_size) {
    const MatrixXd Nd(norm_gram);
    if (Eigen::LLT<MatrixXd>(Nd).info() != Eigen::Success) {
      throw SolverError("norm Gram matrix is not positive definite");
    }
    const MatrixXd Ad(A);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(Ad, Nd, Eigen::EigenvaluesOnly);
    return ges.eigenvalues().minCoeff();
  }

  Ldlt ldlt_n;
  Ldlt ldlt_a;
  factor_spd(ldlt_n, norm_gram, "norm Gram matrix");
  factor_spd(ldlt_a, A, "stiffness matrix");
  const int k = std::min<int>(options.block_size, static_cast<int>(n));
  return smallest_by_subspace_iteration(
      [&](const MatrixXd& X) { return MatrixXd(ldlt_a.solve(norm_gram * X)); },
      [&](const MatrixXd& Q) { return MatrixXd(A * Q); },
      [&](const MatrixXd& Q) { return MatrixXd(norm_gram * Q); }, random_block(n, k, options.seed),
      options);
}

double estimate_inf_sup(const SparseMatrix& B, const SparseMatrix& norm_gram, const VectorXd& cell_areas,
                        const SpectralOptions& options) {
  const auto nv = norm_gram.rows();
  const auto np = B.rows();
  Ldlt ldlt_n;
  factor_spd(ldlt_n, norm_gram, "norm Gram matrix");

  double lambda = 0.0;
  if (nv <= options.dense_max_size) {
    const MatrixXd Bt = MatrixXd(B.transpose());
    const MatrixXd NiBt = ldlt_n.solve(Bt);
    MatrixXd S = B * NiBt;
    S = 0.5 * (S + S.transpose()).eval();

    // Orthonormal basis of the area-weighted mean-zero subspace.
    const MatrixXd m = cell_areas;
    Eigen::HouseholderQR<MatrixXd> qr(m);
    const MatrixXd Qfull = qr.householderQ();
    const MatrixXd Z = Qfull.rightCols(np - 1);
    MatrixXd Sz = Z.transpose() * S * Z;
    MatrixXd Mz = Z.transpose() * cell_areas.asDiagonal() * Z;
    Sz = 0.5 * (Sz + Sz.transpose()).eval();
    Mz = 0.5 * (Mz + Mz.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(Sz, Mz, Eigen::EigenvaluesOnly);
    lambda = ges.eigenvalues().minCoeff();
  } else {
    SystemBlocks aug;
    aug.A = norm_gram;
    aug.B = B;
    aug.cell_areas = cell_areas;
    const SparseMatrix K = augmented_matrix(aug);
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu(K);
    if (lu.info() != Eigen::Success) {
      throw SolverError("inf-sup: augmented norm system is singular: " + lu.lastErrorMessage());
    }
    const auto inverse = [&](const MatrixXd& X) {
      MatrixXd rhs = MatrixXd::Zero(K.rows(), X.cols());
      rhs.middleRows(nv, np) = cell_areas.asDiagonal() * X;
      const MatrixXd sol = lu.solve(rhs);
      return MatrixXd(-sol.middleRows(nv, np));
    };
    const auto apply_s = [&](const MatrixXd& Q) {
      const MatrixXd w = ldlt_n.solve(MatrixXd(B.transpose() * Q));
      return MatrixXd(B * w);
    };
    const auto apply_m = [&](const MatrixXd& Q) { return MatrixXd(cell_areas.asDiagonal() * Q); };
    MatrixXd X = random_block(np, std::min<int>(options.block_size, static_cast<int>(np - 1)), options.seed);
    const double total = cell_areas.sum();
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      X.col(j).array() -= cell_areas.dot(X.col(j)) / total;
    }
    lambda = smallest_by_subspace_iteration(inverse, apply_s, apply_m, X, options);
  }

  if (!(lambda > kNearZeroEigenvalue)) {
    throw SolverError("inf-sup: deflated pressure Schur complement has a near-zero eigenvalue (" +
                      std::to_string(lambda) + "); the pressure space is unstable");
  }
  return std::sqrt(lambda);
}

double constant_pressure_defect(const SparseMatrix& B, const SparseMatrix& norm_gram) {
  Ldlt ldlt_n;
  factor_spd(ldlt_n, norm_gram, "norm Gram matrix");
  const MatrixXd S = B * ldlt_n.solve(MatrixXd(B.transpose()));
  const VectorXd ones = VectorXd::Ones(B.rows());
  return (S * ones).norm() / (S.norm() * ones.norm());
}

}  // namespace sdcr
