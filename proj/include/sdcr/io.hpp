#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "sdcr/assembly.hpp"
#include "sdcr/cr_space.hpp"
#include "sdcr/mesh.hpp"
#include "sdcr/saddle_solver.hpp"
#include "sdcr/verification.hpp"

namespace sdcr {

// Shortest round-trippable text for reals in tables: 12 significant digits,
// "nan" for NaN.
std::string format_real(double value);

// 64-bit FNV-1a of the text, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

// Legacy ASCII VTK unstructured grid (triangles, cell type 5) with
// CELL_DATA region (0 Stokes, 1 Darcy), pressure and the velocity at the
// centroid. `title` goes on the second line and must not contain newlines.
void write_vtk(std::ostream& os, const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u,
               const DiscretePressure& p, const std::string& title);

// MatrixMarket coordinate real general; `comments` become % lines.
void write_matrix_market(std::ostream& os, const SparseMatrix& A, const std::vector<std::string>& comments = {});
// MatrixMarket array real general, one column.
void write_matrix_market(std::ostream& os, const Eigen::VectorXd& v, const std::vector<std::string>& comments = {});

// `comments` are written first, each prefixed with "# ".
void write_convergence_csv(std::ostream& os, const ConvergenceTable& table,
                           const std::vector<std::string>& comments = {});
// Whitespace columns: h err_u_h err_p jump_J interpolation_err.
void write_convergence_dat(std::ostream& os, const ConvergenceTable& table,
                           const std::vector<std::string>& comments = {});
// n,h,alpha_h,beta_h
void write_spectral_csv(std::ostream& os, const std::vector<SpectralReport>& rows,
                        const std::vector<std::string>& comments = {});

}  // namespace sdcr
