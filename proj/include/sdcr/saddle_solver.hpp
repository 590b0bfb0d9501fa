#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "sdcr/assembly.hpp"
#include "sdcr/cr_space.hpp"

namespace sdcr {

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, std::optional<Index> pivot = std::nullopt,
                       std::optional<int> iterations = std::nullopt,
                       std::optional<double> residual = std::nullopt)
      : std::runtime_error(what), pivot_(pivot), iterations_(iterations), residual_(residual) {}

  std::optional<Index> pivot() const { return pivot_; }
  std::optional<int> iterations() const { return iterations_; }
  std::optional<double> residual() const { return residual_; }

 private:
  std::optional<Index> pivot_;
  std::optional<int> iterations_;
  std::optional<double> residual_;
};

enum class SaddleMethod { Direct, Minres };

struct SolverOptions {
  SaddleMethod method = SaddleMethod::Direct;
  bool allow_fallback = true;      // Direct -> MINRES when the LU residual is too large
  double residual_tol = 1e-10;     // acceptance on both relative residuals
  double minres_tol = 1e-12;
  int max_iterations = 0;          // 0 -> 20 (n_v + n_p)
};

struct SaddleResiduals {
  double momentum = 0.0;       // ||A u + B^T p - F|| / max(1, ||F||)
  double mass = 0.0;           // ||B u - G|| / max(1, ||G||)
  double mean_pressure = 0.0;  // |sum |T_k| p_k|
};

struct SaddleSolution {
  DiscreteVelocity u;
  DiscretePressure p;
  SaddleResiduals residuals;
  SaddleMethod method = SaddleMethod::Direct;
  int iterations = 0;
};

// [[A, B^T, 0], [B, 0, m], [0, m^T, 0]] with m the cell areas; the last
// row fixes the area-weighted pressure mean to zero.
SparseMatrix augmented_matrix(const SystemBlocks& blocks);

SaddleSolution solve_saddle(const SystemBlocks& blocks, const SolverOptions& options = {});

struct MinresResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Preconditioned MINRES for symmetric (possibly indefinite) K with an SPD
// diagonal preconditioner given by its diagonal entries.
MinresResult minres(const SparseMatrix& K, const Eigen::VectorXd& rhs, const Eigen::VectorXd& precond_diag,
                    double tol, int max_iterations);

// --- spectral estimators ---------------------------------------------

struct SpectralOptions {
  // Dense generalized eigensolves up to this many unknowns, subspace
  // inverse iteration beyond.
  Index dense_max_size = 2000;
  double iteration_tol = 1e-9;
  int max_iterations = 500;
  int block_size = 6;
  unsigned seed = 7;
};

// Smallest lambda with A v = lambda N v.
double estimate_coercivity(const SparseMatrix& A, const SparseMatrix& norm_gram,
                           const SpectralOptions& options = {});

// sqrt of the smallest eigenvalue of B N^-1 B^T q = lambda M_p q over
// pressures with zero area-weighted mean.
double estimate_inf_sup(const SparseMatrix& B, const SparseMatrix& norm_gram,
                        const Eigen::VectorXd& cell_areas, const SpectralOptions& options = {});

// ||B N^-1 B^T 1|| / ||B N^-1 B^T||_F, i.e. how well the constant pressure
// is annihilated before deflation.
double constant_pressure_defect(const SparseMatrix& B, const SparseMatrix& norm_gram);

struct SpectralReport {
  int level = 0;
  double h = 0.0;
  double alpha_h = 0.0;
  double beta_h = 0.0;
};

}  // namespace sdcr
