#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "sdcr/assembly.hpp"
#include "sdcr/cr_space.hpp"
#include "sdcr/manufactured.hpp"
#include "sdcr/mesh.hpp"
#include "sdcr/saddle_solver.hpp"

namespace sdcr {

// Reference fields evaluated from the side of a given element, so that
// both smooth exact solutions and discrete fields can be compared.
struct ReferenceSolution {
  std::function<Vec2(const Point2&, Index)> u;
  std::function<Mat2(const Point2&, Index)> grad_u;
  std::function<double(const Point2&, Index)> p;
};

ReferenceSolution reference_from(const ExactCase& exact, const Mesh& mesh);
ReferenceSolution reference_from(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u,
                                 const DiscretePressure& p);

struct ErrorComponents {
  double broken_H1_stokes = 0.0;
  double interface_tangential = 0.0;
  double L2_darcy = 0.0;
  double div_darcy = 0.0;
  double jump_J = 0.0;  // sqrt J(e, e)
};

struct ErrorReport {
  double err_u_h = 0.0;
  ErrorComponents components;
  double err_p = 0.0;
  double h = 0.0;
  int n = 0;
};

struct ErrorOptions {
  Execution execution = Execution::Serial;
  int volume_degree = 10;
  int edge_points = 5;
};

// ||u - u_h||_h and ||p - p_h||. The error is integrated elementwise as
// reference-minus-discrete; the J component uses the jumps of that
// difference, which for a smooth reference are the discrete jumps.
ErrorReport compute_error_norms(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                                const DiscreteVelocity& u_h, const DiscretePressure& p_h,
                                const ReferenceSolution& reference, const ErrorOptions& options = {});

ErrorReport compute_error_norms(const Mesh& mesh, const DofMap& dofs, const SaddleSolution& solution,
                                const ExactCase& exact, const ErrorOptions& options = {});

// Cell averages of the reference pressure.
DiscretePressure pressure_projection(const Mesh& mesh, const std::function<double(const Point2&, Index)>& p,
                                     int degree = 10);

// Error of (r_h u, Pi_0 p), i.e. the CR interpolant and the cell-averaged pressure.
ErrorReport interpolation_error(const Mesh& mesh, const DofMap& dofs, const ExactCase& exact,
                                const ErrorOptions& options = {});

// max over interface edges of |mean of [u_h . n]|.
double max_interface_flux_jump(const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u_h);

// log(e_i / e_{i+1}) / log(h_i / h_{i+1}); NaN if either error is not positive.
double observed_order(double e_coarse, double e_fine, double h_coarse, double h_fine);

struct StudyOptions {
  Execution execution = Execution::Serial;
  int quadrature_degree = 10;
  SolverOptions solver;
  // alpha_h and beta_h are estimated when n_v does not exceed this; NaN otherwise.
  Index spectral_max_velocity_dofs = 2000;
  SpectralOptions spectral;
};

struct ConvergenceRow {
  ErrorReport error;
  ErrorReport interpolation;  // (r_h u, Pi_0 p)
  double mass_residual = 0.0;      // ||B u_h - G||
  double interface_flux = 0.0;     // max_interface_flux_jump
  double jump_J = 0.0;             // J(u_h, u_h), the squared component
  double alpha_h = std::numeric_limits<double>::quiet_NaN();
  double beta_h = std::numeric_limits<double>::quiet_NaN();
  Index n_velocity = 0;
  Index n_pressure = 0;
  SaddleMethod method = SaddleMethod::Direct;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  // Entry i compares rows i-1 and i; entry 0 is NaN.
  std::vector<double> eoc_u;
  std::vector<double> eoc_p;
  std::vector<double> eoc_J;
  std::vector<double> eoc_interpolation;
  std::vector<double> eoc_pressure_projection;
};

class StudyError : public std::runtime_error {
 public:
  StudyError(int level, const std::string& what)
      : std::runtime_error("level n=" + std::to_string(level) + ": " + what), level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

// Throws std::invalid_argument unless levels are positive and each doubles the last.
void validate_levels(const std::vector<int>& levels, bool require_doubling);

ConvergenceRow run_level(int n, const MaterialParams& params, const StudyOptions& options = {});

ConvergenceTable run_convergence_study(const std::vector<int>& levels, const MaterialParams& params,
                                       const StudyOptions& options = {});

}  // namespace sdcr
