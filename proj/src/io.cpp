#include "sdcr/io.hpp"

#include <cmath>
#include <cstdio>

namespace sdcr {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

void comment_lines(std::ostream& os, const std::vector<std::string>& comments, const char* prefix) {
  for (const auto& c : comments) os << prefix << c << '\n';
}

// VTK readers want plain decimal; keep full precision.
std::string vtk_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_vtk(std::ostream& os, const Mesh& mesh, const DofMap& dofs, const DiscreteVelocity& u,
               const DiscretePressure& p, const std::string& title) {
  const Index nv = mesh.num_vertices();
  const Index nt = mesh.num_triangles();
  os << "# vtk DataFile Version 3.0\n";
  os << (title.empty() ? std::string("sdcr") : title.substr(0, 255)) << '\n';
  os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nv << " double\n";
  for (const Point2& x : mesh.vertices()) os << vtk_real(x.x()) << ' ' << vtk_real(x.y()) << " 0\n";
  os << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const Triangle& t : mesh.triangles()) {
    os << "3 " << t.vertices[0] << ' ' << t.vertices[1] << ' ' << t.vertices[2] << '\n';
  }
  os << "CELL_TYPES " << nt << '\n';
  for (Index t = 0; t < nt; ++t) os << "5\n";

  os << "CELL_DATA " << nt << '\n';
  os << "SCALARS region int 1\nLOOKUP_TABLE default\n";
  for (const Triangle& t : mesh.triangles()) os << (t.region == Region::Stokes ? 0 : 1) << '\n';
  os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (Index t = 0; t < nt; ++t) os << vtk_real(p.cell_values[t]) << '\n';
  os << "VECTORS velocity double\n";
  for (Index t = 0; t < nt; ++t) {
    const Vec2 v = eval_velocity(mesh, dofs, u, t, mesh.centroid(t));
    os << vtk_real(v.x()) << ' ' << vtk_real(v.y()) << " 0\n";
  }
}

void write_matrix_market(std::ostream& os, const SparseMatrix& A, const std::vector<std::string>& comments) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  comment_lines(os, comments, "% ");
  os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << vtk_real(it.value()) << '\n';
    }
  }
}

void write_matrix_market(std::ostream& os, const Eigen::VectorXd& v, const std::vector<std::string>& comments) {
  os << "%%MatrixMarket matrix array real general\n";
  comment_lines(os, comments, "% ");
  os << v.size() << " 1\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << vtk_real(v[i]) << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table, const std::vector<std::string>& comments) {
  comment_lines(os, comments, "# ");
  os << "n,h,err_u_h,eoc_u,err_p,eoc_p,jump_J,eoc_J,alpha_h,beta_h\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const ConvergenceRow& r = table.rows[i];
    os << r.error.n << ',' << format_real(r.error.h) << ',' << format_real(r.error.err_u_h) << ','
       << format_real(table.eoc_u[i]) << ',' << format_real(r.error.err_p) << ',' << format_real(table.eoc_p[i])
       << ',' << format_real(r.jump_J) << ',' << format_real(table.eoc_J[i]) << ',' << format_real(r.alpha_h)
       << ',' << format_real(r.beta_h) << '\n';
  }
}

void write_convergence_dat(std::ostream& os, const ConvergenceTable& table, const std::vector<std::string>& comments) {
  comment_lines(os, comments, "# ");
  os << "# h err_u_h err_p jump_J interpolation_err\n";
  for (const ConvergenceRow& r : table.rows) {
    os << format_real(r.error.h) << ' ' << format_real(r.error.err_u_h) << ' ' << format_real(r.error.err_p) << ' '
       << format_real(r.jump_J) << ' ' << format_real(r.interpolation.err_u_h) << '\n';
  }
}

void write_spectral_csv(std::ostream& os, const std::vector<SpectralReport>& rows,
                        const std::vector<std::string>& comments) {
  comment_lines(os, comments, "# ");
  os << "n,h,alpha_h,beta_h\n";
  for (const SpectralReport& r : rows) {
    os << r.level << ',' << format_real(r.h) << ',' << format_real(r.alpha_h) << ',' << format_real(r.beta_h)
       << '\n';
  }
}

}  // namespace sdcr
