#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "json.hpp"

namespace csrbf::cli {
namespace {

using Json = nlohmann::json;

// Raw flag values; anything left empty falls back to the config file, then defaults.
struct Flags {
  std::optional<double> kappa, u0, a, b, c, p0, rho, rw, length, newton_tol, horizon, step;
  std::optional<int> n, quad_m, samples, refine_rounds, threads;
  std::optional<std::string> kernel, format, out, config;
  std::optional<std::vector<double>> rw_grid, rho_grid, length_grid;
};

void add_model_options(CLI::App* sub, Flags& f) {
  sub->add_option("--kappa", f.kappa, "Nondimensional toxicity parameter c/(ab)");
  sub->add_option("--u0", f.u0, "Scaled initial population (default 0.1)");
  sub->add_option("--a", f.a, "Birth rate (dimensional alternative)");
  sub->add_option("--b", f.b, "Crowding coefficient");
  sub->add_option("--c", f.c, "Toxicity coefficient");
  sub->add_option("--p0", f.p0, "Initial population");
}

void add_common_options(CLI::App* sub, Flags& f) {
  sub->add_option("--format", f.format, "Output format: csv or json");
  sub->add_option("--out", f.out, "Output file (default: $CSRBF_OUTPUT_DIR or stdout)");
  sub->add_option("--config", f.config, "JSON file mirroring the flags; flags win");
  sub->add_option("--threads", f.threads, "Worker threads (0 = hardware)");
}

void add_collocation_options(CLI::App* sub, Flags& f) {
  sub->add_option("--n", f.n, "Basis size N");
  sub->add_option("--rho", f.rho, "Node clustering exponent");
  sub->add_option("--rw", f.rw, "Support radius r_omega");
  sub->add_option("--L", f.length, "Last collocation node L");
  sub->add_option("--kernel", f.kernel, "Wendland kernel as s,k (default 3,5)");
  sub->add_option("--newton-tol", f.newton_tol, "Newton stopping tolerance (max |R|)");
  sub->add_option("--quad-m", f.quad_m, "Gauss-Legendre order m for ||R||^2 (default max(50,2N))");
}

template <class T>
void fill(std::optional<T>& slot, const Json& doc, const char* key) {
  if (slot || !doc.contains(key)) return;
  try {
    slot = doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

void merge_config(Flags& f) {
  if (!f.config) return;
  std::ifstream in(*f.config);
  if (!in) throw UsageError("cannot open config file " + *f.config);
  Json doc;
  try {
    in >> doc;
  } catch (const Json::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  static const char* known[] = {"kappa", "u0", "a", "b", "c", "p0", "n", "rho", "rw", "L",
                                "kernel", "newton_tol", "quad_m", "format", "out", "samples",
                                "horizon", "step", "refine_rounds", "threads", "rw_grid",
                                "rho_grid", "L_grid"};
  for (const auto& item : doc.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw UsageError("unknown config key '" + item.key() + "'");
  }
  fill(f.kappa, doc, "kappa");
  fill(f.u0, doc, "u0");
  fill(f.a, doc, "a");
  fill(f.b, doc, "b");
  fill(f.c, doc, "c");
  fill(f.p0, doc, "p0");
  fill(f.n, doc, "n");
  fill(f.rho, doc, "rho");
  fill(f.rw, doc, "rw");
  fill(f.length, doc, "L");
  fill(f.kernel, doc, "kernel");
  fill(f.newton_tol, doc, "newton_tol");
  fill(f.quad_m, doc, "quad_m");
  fill(f.format, doc, "format");
  fill(f.out, doc, "out");
  fill(f.samples, doc, "samples");
  fill(f.horizon, doc, "horizon");
  fill(f.step, doc, "step");
  fill(f.refine_rounds, doc, "refine_rounds");
  fill(f.threads, doc, "threads");
  fill(f.rw_grid, doc, "rw_grid");
  fill(f.rho_grid, doc, "rho_grid");
  fill(f.length_grid, doc, "L_grid");
}

KernelSpec parse_kernel(const std::string& text) {
  std::istringstream is(text);
  KernelSpec spec;
  char comma = 0;
  if (!(is >> spec.s >> comma >> spec.k) || comma != ',' || !is.eof()) {
    throw UsageError("--kernel expects s,k (for example 3,5)");
  }
  try {
    (void)wendland_profile(spec.s, spec.k);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return spec;
}

ModelParams resolve_model(const Flags& f) {
  const bool dimensional = f.a || f.b || f.c || f.p0;
  try {
    if (dimensional) {
      if (!(f.a && f.b && f.c && f.p0)) throw UsageError("--a, --b, --c and --p0 must be given together");
      if (f.kappa || f.u0) throw UsageError("give either --kappa/--u0 or --a/--b/--c/--p0, not both");
      return nondimensionalize(*f.a, *f.b, *f.c, *f.p0);
    }
    if (!f.kappa) throw UsageError("--kappa is required");
    return make_params(*f.kappa, f.u0.value_or(0.1));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

void check_grid(const std::optional<std::vector<double>>& grid, const char* name) {
  if (!grid) return;
  if (grid->empty()) throw UsageError(std::string(name) + " must not be empty");
  for (double v : *grid) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(name) + " values must be > 0");
  }
}

RunSpec build_spec(Command command, const std::string& target, const Flags& f) {
  RunSpec spec;
  spec.command = command;
  spec.target = target;

  if (f.format) {
    if (*f.format == "csv") {
      spec.format = OutputFormat::csv;
    } else if (*f.format == "json") {
      spec.format = OutputFormat::json;
    } else {
      throw UsageError("--format must be csv or json");
    }
  }
  spec.out_path = f.out;
  if (f.threads) {
    if (*f.threads < 0) throw UsageError("--threads must be >= 0");
    spec.threads = static_cast<unsigned>(*f.threads);
  }

  if (command == Command::reproduce) {
    if (target != "table2" && target != "table3" && target != "figure1") {
      throw UsageError("reproduce target must be table2, table3 or figure1");
    }
    return spec;
  }

  spec.params = resolve_model(f);

  if (command == Command::oracle) {
    spec.horizon = f.horizon.value_or(10.0);
    spec.step = f.step.value_or(1e-4);
    spec.samples = f.samples.value_or(500);
    if (!(spec.horizon > 0.0)) throw UsageError("--horizon must be > 0");
    if (!(spec.step > 0.0) || spec.step > spec.horizon) throw UsageError("--step must be in (0, horizon]");
    if (spec.samples < 1) throw UsageError("--samples must be >= 1");
    return spec;
  }

  CollocationConfig& config = spec.config;
  config.n = f.n.value_or(18);
  config.rho = f.rho.value_or(1.0);
  config.r_omega = f.rw.value_or(1.0);
  config.length = f.length.value_or(default_length(spec.params.kappa));
  if (f.kernel) config.kernel = parse_kernel(*f.kernel);
  if (f.newton_tol) config.newton_tol = *f.newton_tol;
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  spec.quad_m = f.quad_m.value_or(0);
  if (spec.quad_m < 0) throw UsageError("--quad-m must be >= 0");
  spec.samples = f.samples.value_or(500);
  if (spec.samples < 2) throw UsageError("--samples must be >= 2");

  if (command == Command::tune) {
    spec.refine_rounds = f.refine_rounds.value_or(2);
    if (spec.refine_rounds < 0) throw UsageError("--refine-rounds must be >= 0");
    check_grid(f.rw_grid, "--rw-grid");
    check_grid(f.rho_grid, "--rho-grid");
    check_grid(f.length_grid, "--L-grid");
    spec.rw_grid = f.rw_grid.value_or(std::vector<double>{});
    spec.rho_grid = f.rho_grid.value_or(std::vector<double>{});
    spec.length_grid = f.length_grid.value_or(std::vector<double>{});
  }
  return spec;
}

}  // namespace

std::optional<RunSpec> parse_run_spec(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Volterra population model solver: indirect collocation with Wendland kernels",
               "volterra_csrbf"};
  app.require_subcommand(1);
  Flags f;
  std::string target;

  auto* solve = app.add_subcommand("solve", "Solve one configuration and compare with the RK4 oracle");
  add_model_options(solve, f);
  add_collocation_options(solve, f);
  add_common_options(solve, f);
  solve->add_option("--samples", f.samples, "Trajectory rows on [0, L] (default 500)");

  auto* tune = app.add_subcommand("tune", "Minimise ||R||^2 over r_omega, rho and L");
  add_model_options(tune, f);
  add_collocation_options(tune, f);
  add_common_options(tune, f);
  tune->add_option("--refine-rounds", f.refine_rounds, "Local refinement rounds (default 2)");
  tune->add_option("--rw-grid", f.rw_grid, "Coarse r_omega values")->delimiter(',');
  tune->add_option("--rho-grid", f.rho_grid, "Coarse rho values")->delimiter(',');
  tune->add_option("--L-grid", f.length_grid, "Coarse L values")->delimiter(',');

  auto* oracle = app.add_subcommand("oracle", "RK4 reference trajectory and closed-form u_max");
  add_model_options(oracle, f);
  add_common_options(oracle, f);
  oracle->add_option("--horizon", f.horizon, "Integration horizon (default 10)");
  oracle->add_option("--step", f.step, "RK4 step (default 1e-4)");
  oracle->add_option("--samples", f.samples, "Emitted rows (default 500)");

  auto* reproduce = app.add_subcommand("reproduce", "Reproduce the published tables and figure data");
  reproduce->add_option("target", target, "table2 | table3 | figure1")->required();
  add_common_options(reproduce, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what() + std::string("\n") + app.help());
  }

  merge_config(f);
  Command command = Command::solve;
  if (tune->parsed()) command = Command::tune;
  if (oracle->parsed()) command = Command::oracle;
  if (reproduce->parsed()) command = Command::reproduce;
  return build_spec(command, target, f);
}

}  // namespace csrbf::cli
