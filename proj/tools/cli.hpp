#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sdcr/assembly.hpp"

namespace sdcr::cli {

enum class Command { Solve, Convergence, Infsup };

struct RunConfig {
  Command command = Command::Solve;
  std::vector<int> levels;
  double mu = 1.0;
  double alpha1 = 1.0;
  double kxx = 1.0;
  double kxy = 0.0;
  double kyy = 1.0;
  std::optional<double> penalty_weight;  // unset -> 1 + 2 mu
  int quad_degree = 10;
  std::filesystem::path out = "sdcr_out";
  bool emit_vtk = false;
  bool emit_matrices = false;
  unsigned seed = 7;
  bool serial = false;

  MaterialParams material() const;
};

// Usage problems: bad flags, invalid parameter values, bad level lists.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses argv (flags and an optional --config key=value file, flags win).
// Throws UsageError; returns nullopt when --help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& help_out);

void validate(const RunConfig& config);

// Canonical key=value text, one key per line; parsing it back with
// --config reproduces the same config and therefore the same text.
std::string serialize(const RunConfig& config);
std::string config_hash(const RunConfig& config);

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

// Runs the command, writes artifacts under config.out and a one-line
// JSON status to `log`. Returns the exit status.
int run(const RunConfig& config, std::ostream& log);

// parse_args + validate + run, mapping failures to exit codes and error JSON.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdcr::cli
