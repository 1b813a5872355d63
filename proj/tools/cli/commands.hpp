#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/output.hpp"
#include "csrbf/collocation.hpp"
#include "csrbf/model.hpp"

namespace csrbf::cli {

enum class Command { solve, tune, oracle, reproduce };

// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitTolerance = 3;

/// Everything a command needs, validated before any computation starts.
struct RunSpec {
  Command command = Command::solve;
  std::string target;  // reproduce: table2 | table3 | figure1
  ModelParams params;
  CollocationConfig config;
  int quad_m = 0;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> out_path;

  int samples = 500;        // trajectory rows
  double horizon = 10.0;    // oracle
  double step = 1e-4;       // oracle
  int refine_rounds = 2;    // tune
  unsigned threads = 0;
  std::vector<double> rw_grid, rho_grid, length_grid;  // tune overrides
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses argv (flags override an optional --config JSON file). Throws
/// UsageError on invalid input; returns nullopt when only help was requested.
std::optional<RunSpec> parse_run_spec(int argc, const char* const* argv, std::ostream& out);

int run_solve(const RunSpec& spec, std::ostream& out, std::ostream& diag);
int run_tune(const RunSpec& spec, std::ostream& out, std::ostream& diag);
int run_oracle(const RunSpec& spec, std::ostream& out, std::ostream& diag);
int run_reproduce(const RunSpec& spec, std::ostream& out, std::ostream& diag);

/// Dispatches on spec.command and routes output to --out, $CSRBF_OUTPUT_DIR or `out`.
int run(const RunSpec& spec, std::ostream& out, std::ostream& diag);

/// Full entry point used by main(): parse, validate, dispatch.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& diag);

}  // namespace csrbf::cli
