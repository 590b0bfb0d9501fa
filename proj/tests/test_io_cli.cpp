#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "sdcr/io.hpp"

using namespace sdcr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "sdcr_run");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sdcr_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Io, FormatAndHash) {
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_real(std::nan("")), "nan");
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Io, VtkLayout) {
  const Mesh mesh = build_structured_mesh(2);
  const DofMap dofs = build_dof_map(mesh);
  DiscreteVelocity u;
  u.coefficients = Eigen::VectorXd::Zero(dofs.n_velocity());
  DiscretePressure p;
  p.cell_values = Eigen::VectorXd::LinSpaced(dofs.n_pressure(), 0.0, 1.0);
  std::ostringstream os;
  write_vtk(os, mesh, dofs, u, p, "test");
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("# vtk DataFile Version 3.0\ntest\nASCII\nDATASET UNSTRUCTURED_GRID\n", 0), 0u);
  EXPECT_NE(s.find("POINTS 15 double"), std::string::npos);
  EXPECT_NE(s.find("CELLS 16 64"), std::string::npos);
  EXPECT_NE(s.find("CELL_TYPES 16\n5\n"), std::string::npos);
  EXPECT_NE(s.find("CELL_DATA 16\nSCALARS region int 1\nLOOKUP_TABLE default\n0\n"), std::string::npos);
  EXPECT_NE(s.find("SCALARS pressure double 1"), std::string::npos);
  EXPECT_NE(s.find("VECTORS velocity double"), std::string::npos);
}

TEST(Io, MatrixMarket) {
  SparseMatrix A(2, 3);
  A.insert(0, 2) = 1.5;
  A.insert(1, 0) = -2.0;
  A.makeCompressed();
  std::ostringstream os;
  write_matrix_market(os, A, {"hello"});
  EXPECT_EQ(os.str(), "%%MatrixMarket matrix coordinate real general\n% hello\n2 3 2\n2 1 -2\n1 3 1.5\n");
}

TEST(Cli, UsageErrors) {
  std::string err;
  EXPECT_EQ(run_cli({"convergence", "--levels", "4,6"}, nullptr, &err), cli::kExitUsage);
  const auto j = nlohmann::json::parse(err);
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["kind"], "usage");
  EXPECT_EQ(run_cli({"solve"}), cli::kExitUsage);
  EXPECT_EQ(run_cli({"--levels", "2"}), cli::kExitUsage);
  EXPECT_EQ(run_cli({"solve", "--levels", "2", "--mu", "-1"}), cli::kExitUsage);
  EXPECT_EQ(run_cli({"solve", "--levels", "2", "--no-such-flag"}), cli::kExitUsage);
  EXPECT_EQ(run_cli({"solve", "--levels", "2", "--quad-degree", "0"}), cli::kExitUsage);
}

TEST(Cli, SolveWritesArtifacts) {
  const fs::path out = scratch("solve");
  std::string log;
  ASSERT_EQ(run_cli({"solve", "--levels", "2", "--emit-vtk", "--emit-matrices", "--out", out.string()}, &log), 0);
  EXPECT_TRUE(fs::exists(out / "solution_n2.vtk"));
  EXPECT_TRUE(fs::exists(out / "A_n2.mtx"));
  EXPECT_TRUE(fs::exists(out / "B_n2.mtx"));
  const auto summary = nlohmann::json::parse(slurp(out / "solve.json"));
  EXPECT_EQ(summary["levels"][0]["n"], 2);
  EXPECT_LE(summary["levels"][0]["mass_residual"].get<double>(), 1e-10);
  EXPECT_EQ(nlohmann::json::parse(log)["status"], "ok");
  EXPECT_EQ(slurp(out / "A_n2.mtx").rfind("%%MatrixMarket matrix coordinate real general\n% sdcr solve config-hash=", 0), 0u);
}

TEST(Cli, ConfigRoundTripAndDeterminism) {
  const fs::path a = scratch("det_a");
  ASSERT_EQ(run_cli({"convergence", "--levels", "2,4", "--mu", "1.25", "--kxy", "0.1", "--out", a.string()}), 0);
  const std::string csv = slurp(a / "convergence.csv");
  ASSERT_EQ(csv.rfind("# sdcr convergence config-hash=", 0), 0u);

  // recover the echoed config and run it again from a file
  std::istringstream is(csv);
  std::string echoed;
  for (std::string line; std::getline(is, line);) {
    if (line.rfind("# config ", 0) == 0) echoed += line.substr(9) + '\n';
  }
  const fs::path cfg = fs::temp_directory_path() / "sdcr_test_det.cfg";
  std::ofstream(cfg) << echoed;
  const auto parsed = cli::parse_args(3, std::array<const char*, 3>{"x", "--config", cfg.c_str()}.data(), std::cout);
  ASSERT_TRUE(parsed.has_value());
  EXPECT_EQ(cli::serialize(*parsed), echoed);

  fs::remove(a / "convergence.csv");
  ASSERT_EQ(run_cli({"--config", cfg.string()}), 0);
  EXPECT_EQ(slurp(a / "convergence.csv"), csv);
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path cfg = fs::temp_directory_path() / "sdcr_test_override.cfg";
  std::ofstream(cfg) << "command=infsup\nlevels=2,4\nmu=3\n";
  const auto parsed =
      cli::parse_args(5, std::array<const char*, 5>{"x", "--config", cfg.c_str(), "--mu", "2"}.data(), std::cout);
  ASSERT_TRUE(parsed.has_value());
  EXPECT_EQ(parsed->command, cli::Command::Infsup);
  EXPECT_EQ(parsed->levels, (std::vector<int>{2, 4}));
  EXPECT_EQ(parsed->mu, 2.0);
}

TEST(Cli, InfsupRows) {
  const fs::path out = scratch("infsup");
  ASSERT_EQ(run_cli({"infsup", "--levels", "2,4,8", "--out", out.string()}), 0);
  std::istringstream is(slurp(out / "infsup.csv"));
  int rows = 0;
  bool header = false;
  for (std::string line; std::getline(is, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      EXPECT_EQ(line, "n,h,alpha_h,beta_h");
      header = true;
      continue;
    }
    const double beta = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_GT(beta, 0.01);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}
