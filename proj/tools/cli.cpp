#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdcr/io.hpp"
#include "sdcr/manufactured.hpp"
#include "sdcr/saddle_solver.hpp"
#include "sdcr/verification.hpp"

namespace sdcr::cli {

using json = nlohmann::ordered_json;

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Convergence: return "convergence";
    case Command::Infsup: return "infsup";
  }
  return "?";
}

std::optional<Command> command_from(const std::string& s) {
  if (s == "solve") return Command::Solve;
  if (s == "convergence") return Command::Convergence;
  if (s == "infsup") return Command::Infsup;
  return std::nullopt;
}

std::string exact_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

MaterialParams RunConfig::material() const {
  MaterialParams p;
  p.mu = mu;
  p.alpha1 = alpha1;
  p.K << kxx, kxy, kxy, kyy;
  p.penalty_stokes_weight = penalty_weight;
  return p;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& help_out) {
  RunConfig cfg;
  CLI::App app{"Crouzeix-Raviart solver for coupled Stokes-Darcy flow"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string command_text;
  double penalty = 0.0;
  app.add_option("--command", command_text, "solve | convergence | infsup (alternative to the subcommand)");
  app.add_option("--levels", cfg.levels, "mesh levels n, comma separated")->delimiter(',');
  app.add_option("--mu", cfg.mu, "viscosity");
  app.add_option("--alpha1", cfg.alpha1, "slip coefficient");
  app.add_option("--kxx", cfg.kxx, "permeability K(0,0)");
  app.add_option("--kxy", cfg.kxy, "permeability K(0,1) = K(1,0)");
  app.add_option("--kyy", cfg.kyy, "permeability K(1,1)");
  auto* penalty_opt = app.add_option("--penalty-weight", penalty, "Stokes jump-penalty weight (default 1 + 2 mu)");
  app.add_option("--quad-degree", cfg.quad_degree, "volume quadrature exactness degree");
  app.add_option("--out", cfg.out, "output directory");
  app.add_flag("--emit-vtk", cfg.emit_vtk, "write VTK solution files");
  app.add_flag("--emit-matrices", cfg.emit_matrices, "write MatrixMarket system blocks");
  app.add_option("--seed", cfg.seed, "seed for iterative eigen-estimators");
  app.add_flag("--serial", cfg.serial, "use the serial kernels");

  auto* solve = app.add_subcommand("solve", "solve at each level, write a JSON summary (and VTK/matrices)");
  auto* conv = app.add_subcommand("convergence", "convergence study, CSV and gnuplot data");
  auto* infsup = app.add_subcommand("infsup", "coercivity and inf-sup estimates, CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    help_out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  std::optional<Command> sub;
  if (solve->parsed()) sub = Command::Solve;
  if (conv->parsed()) sub = Command::Convergence;
  if (infsup->parsed()) sub = Command::Infsup;
  std::optional<Command> keyed;
  if (!command_text.empty()) {
    keyed = command_from(command_text);
    if (!keyed) throw UsageError("unknown command '" + command_text + "'");
  }
  if (sub && keyed && *sub != *keyed) throw UsageError("subcommand conflicts with command=" + command_text);
  if (!sub && !keyed) throw UsageError("a command is required: solve, convergence or infsup");
  cfg.command = sub ? *sub : *keyed;
  if (penalty_opt->count() > 0) cfg.penalty_weight = penalty;
  return cfg;
}

void validate(const RunConfig& cfg) {
  try {
    validate_levels(cfg.levels, cfg.command == Command::Convergence);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (cfg.command == Command::Convergence && cfg.levels.size() < 2) {
    throw UsageError("convergence needs at least two levels");
  }
  if (cfg.quad_degree < 1 || cfg.quad_degree > 40) throw UsageError("quad-degree must be in [1, 40]");
  if (cfg.penalty_weight && !(*cfg.penalty_weight > 0.0)) throw UsageError("penalty-weight must be positive");
  try {
    cfg.material().validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::string serialize(const RunConfig& cfg) {
  std::ostringstream os;
  os << "command=" << command_name(cfg.command) << '\n';
  os << "levels=";
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) os << (i ? "," : "") << cfg.levels[i];
  os << '\n';
  os << "mu=" << exact_real(cfg.mu) << '\n';
  os << "alpha1=" << exact_real(cfg.alpha1) << '\n';
  os << "kxx=" << exact_real(cfg.kxx) << '\n';
  os << "kxy=" << exact_real(cfg.kxy) << '\n';
  os << "kyy=" << exact_real(cfg.kyy) << '\n';
  if (cfg.penalty_weight) os << "penalty-weight=" << exact_real(*cfg.penalty_weight) << '\n';
  os << "quad-degree=" << cfg.quad_degree << '\n';
  os << "out=\"" << cfg.out.generic_string() << "\"\n";
  os << "emit-vtk=" << (cfg.emit_vtk ? "true" : "false") << '\n';
  os << "emit-matrices=" << (cfg.emit_matrices ? "true" : "false") << '\n';
  os << "seed=" << cfg.seed << '\n';
  os << "serial=" << (cfg.serial ? "true" : "false") << '\n';
  return os.str();
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(serialize(cfg)); }

namespace {

struct Provenance {
  std::string hash;
  std::string text;
  std::vector<std::string> lines;  // for "#"/"%" comment headers

  explicit Provenance(const RunConfig& cfg) : hash(config_hash(cfg)), text(serialize(cfg)) {
    lines.push_back(std::string("sdcr ") + command_name(cfg.command) + " config-hash=" + hash);
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) lines.push_back("config " + line);
  }

  json to_json() const { return {{"config_hash", hash}, {"config", text}}; }
};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

const char* method_name(SaddleMethod m) { return m == SaddleMethod::Direct ? "direct" : "minres"; }

json error_json(const ErrorReport& e) {
  return {{"err_u_h", e.err_u_h},
          {"err_p", e.err_p},
          {"components",
           {{"broken_H1_stokes", e.components.broken_H1_stokes},
            {"interface_tangential", e.components.interface_tangential},
            {"L2_darcy", e.components.L2_darcy},
            {"div_darcy", e.components.div_darcy},
            {"jump_J", e.components.jump_J}}}};
}

std::vector<std::string> run_solve(const RunConfig& cfg, const Provenance& prov) {
  const MaterialParams params = cfg.material();
  const Execution exec = cfg.serial ? Execution::Serial : Execution::Parallel;
  std::vector<std::string> written;
  json levels = json::array();
  for (int n : cfg.levels) {
    const Mesh mesh = build_structured_mesh(n);
    const DofMap dofs = build_dof_map(mesh);
    const ExactCase exact = manufactured_case(params, mesh.domain());
    AssemblyOptions aopts;
    aopts.execution = exec;
    aopts.rhs_degree = cfg.quad_degree;
    const SystemBlocks blocks = assemble_system(mesh, dofs, params, exact.source(), aopts);
    SaddleSolution sol;
    try {
      sol = solve_saddle(blocks);
    } catch (const SolverError& e) {
      throw StudyError(n, e.what());
    }
    ErrorOptions eopts;
    eopts.execution = exec;
    eopts.volume_degree = cfg.quad_degree;
    const ErrorReport err = compute_error_norms(mesh, dofs, sol, exact, eopts);

    const std::string tag = "_n" + std::to_string(n);
    if (cfg.emit_vtk) {
      const auto path = cfg.out / ("solution" + tag + ".vtk");
      auto os = open_output(path);
      write_vtk(os, mesh, dofs, sol.u, sol.p, prov.lines.front() + " n=" + std::to_string(n));
      written.push_back(path.filename().string());
    }
    if (cfg.emit_matrices) {
      const std::pair<const char*, const SparseMatrix*> mats[] = {{"A", &blocks.A}, {"B", &blocks.B}};
      for (const auto& [name, m] : mats) {
        const auto path = cfg.out / (std::string(name) + tag + ".mtx");
        auto os = open_output(path);
        write_matrix_market(os, *m, prov.lines);
        written.push_back(path.filename().string());
      }
      const std::pair<const char*, const Eigen::VectorXd*> vecs[] = {{"F", &blocks.F}, {"G", &blocks.G}};
      for (const auto& [name, v] : vecs) {
        const auto path = cfg.out / (std::string(name) + tag + ".mtx");
        auto os = open_output(path);
        write_matrix_market(os, *v, prov.lines);
        written.push_back(path.filename().string());
      }
    }

    levels.push_back({{"n", n},
                      {"h", mesh.h()},
                      {"sigma_h", mesh.sigma_h()},
                      {"n_velocity", dofs.n_velocity()},
                      {"n_pressure", dofs.n_pressure()},
                      {"method", method_name(sol.method)},
                      {"iterations", sol.iterations},
                      {"residuals",
                       {{"momentum", sol.residuals.momentum},
                        {"mass", sol.residuals.mass},
                        {"mean_pressure", sol.residuals.mean_pressure}}},
                      {"mass_residual", (blocks.B * sol.u.coefficients - blocks.G).norm()},
                      {"interface_flux", max_interface_flux_jump(mesh, dofs, sol.u)},
                      {"jump_J", sol.u.coefficients.dot(blocks.penalty * sol.u.coefficients)},
                      {"errors", error_json(err)}});
  }
  json summary = prov.to_json();
  summary["levels"] = levels;
  const auto path = cfg.out / "solve.json";
  auto os = open_output(path);
  os << summary.dump(2) << '\n';
  written.push_back(path.filename().string());
  return written;
}

std::vector<std::string> run_convergence(const RunConfig& cfg, const Provenance& prov) {
  StudyOptions opts;
  opts.execution = cfg.serial ? Execution::Serial : Execution::Parallel;
  opts.quadrature_degree = cfg.quad_degree;
  opts.spectral.seed = cfg.seed;
  const ConvergenceTable table = run_convergence_study(cfg.levels, cfg.material(), opts);

  std::vector<std::string> written;
  {
    const auto path = cfg.out / "convergence.csv";
    auto os = open_output(path);
    write_convergence_csv(os, table, prov.lines);
    written.push_back(path.filename().string());
  }
  {
    const auto path = cfg.out / "convergence.dat";
    auto os = open_output(path);
    write_convergence_dat(os, table, prov.lines);
    written.push_back(path.filename().string());
  }
  json rows = json::array();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const ConvergenceRow& r = table.rows[i];
    rows.push_back({{"n", r.error.n},
                    {"h", r.error.h},
                    {"n_velocity", r.n_velocity},
                    {"n_pressure", r.n_pressure},
                    {"errors", error_json(r.error)},
                    {"interpolation", error_json(r.interpolation)},
                    {"mass_residual", r.mass_residual},
                    {"interface_flux", r.interface_flux},
                    {"jump_J", r.jump_J},
                    {"alpha_h", real_or_null(r.alpha_h)},
                    {"beta_h", real_or_null(r.beta_h)},
                    {"eoc_u", real_or_null(table.eoc_u[i])},
                    {"eoc_p", real_or_null(table.eoc_p[i])},
                    {"eoc_J", real_or_null(table.eoc_J[i])},
                    {"eoc_interpolation", real_or_null(table.eoc_interpolation[i])}});
  }
  json summary = prov.to_json();
  summary["rows"] = rows;
  const auto path = cfg.out / "convergence.json";
  auto os = open_output(path);
  os << summary.dump(2) << '\n';
  written.push_back(path.filename().string());
  return written;
}

std::vector<std::string> run_infsup(const RunConfig& cfg, const Provenance& prov) {
  const MaterialParams params = cfg.material();
  const Execution exec = cfg.serial ? Execution::Serial : Execution::Parallel;
  SpectralOptions sopts;
  sopts.seed = cfg.seed;
  std::vector<SpectralReport> rows;
  for (int n : cfg.levels) {
    try {
      const Mesh mesh = build_structured_mesh(n);
      const DofMap dofs = build_dof_map(mesh);
      const SparseMatrix A = SparseMatrix(assemble_stiffness(mesh, dofs, params, exec) +
                                          assemble_jump_penalty(mesh, dofs, params, exec));
      const SparseMatrix B = assemble_divergence(mesh, dofs, exec);
      const SparseMatrix N = assemble_norm_gram(mesh, dofs, params, exec);
      SpectralReport r;
      r.level = n;
      r.h = mesh.h();
      r.alpha_h = estimate_coercivity(A, N, sopts);
      r.beta_h = estimate_inf_sup(B, N, cell_areas(mesh), sopts);
      rows.push_back(r);
    } catch (const SolverError& e) {
      throw StudyError(n, e.what());
    }
  }
  const auto path = cfg.out / "infsup.csv";
  auto os = open_output(path);
  write_spectral_csv(os, rows, prov.lines);
  return {path.filename().string()};
}

json failure(const char* kind, const std::string& message) {
  return {{"status", "error"}, {"kind", kind}, {"message", message}};
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  std::filesystem::create_directories(cfg.out);
  const Provenance prov(cfg);
  std::vector<std::string> written;
  switch (cfg.command) {
    case Command::Solve: written = run_solve(cfg, prov); break;
    case Command::Convergence: written = run_convergence(cfg, prov); break;
    case Command::Infsup: written = run_infsup(cfg, prov); break;
  }
  const json status = {{"status", "ok"},
                       {"command", command_name(cfg.command)},
                       {"config_hash", prov.hash},
                       {"out", cfg.out.generic_string()},
                       {"files", written}};
  log << status.dump() << '\n';
  return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    const auto parsed = parse_args(argc, argv, out);
    if (!parsed) return kExitOk;
    cfg = *parsed;
    validate(cfg);
  } catch (const UsageError& e) {
    err << failure("usage", e.what()).dump() << '\n';
    return kExitUsage;
  }

  try {
    return run(cfg, out);
  } catch (const StudyError& e) {
    json j = failure("solver", e.what());
    j["level"] = e.level();
    err << j.dump() << '\n';
    std::ofstream(cfg.out / "error.json") << j.dump(2) << '\n';
    return kExitSolver;
  } catch (const SolverError& e) {
    json j = failure("solver", e.what());
    if (e.pivot()) j["pivot"] = *e.pivot();
    if (e.iterations()) j["iterations"] = *e.iterations();
    if (e.residual()) j["residual"] = *e.residual();
    err << j.dump() << '\n';
    std::ofstream(cfg.out / "error.json") << j.dump(2) << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << failure("runtime", e.what()).dump() << '\n';
    return 1;
  }
}

}  // namespace sdcr::cli
