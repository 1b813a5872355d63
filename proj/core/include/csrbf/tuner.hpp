#pragma once

#include <vector>

#include "csrbf/collocation.hpp"
#include "csrbf/model.hpp"

namespace csrbf {

struct TuneGrid {
  std::vector<double> r_omegas;
  std::vector<double> rhos;
  std::vector<double> lengths;
};

/// r_omega in {0.5, 1, 1.5, 2, 3}, rho in 1.0..2.0 step 0.05, and L from
/// the collocation default plus {1, 2, 3, 5, 8, 10}.
TuneGrid default_tune_grid(const ModelParams& params);

struct TuneOptions {
  int refine_rounds = 2;
  bool refine_length = false;
  double r_omega_step = 0.25;  // first refinement step
  double rho_step = 0.025;
  double length_step = 0.5;
  int quadrature_order = 0;    // <= 0: max(50, 2N)
  unsigned threads = 0;        // 0: hardware concurrency
  CollocationConfig base{};    // kernel and Newton settings; n, L, rho, r_omega are overwritten
};

struct TuneRecord {
  double r_omega = 0.0;
  double rho = 0.0;
  double length = 0.0;
  double norm_sq = 0.0;  // measured even when not converged; +inf if the solve threw
  bool converged = false;
};

struct TuneResult {
  CollocationConfig best_config;
  double best_norm_sq = 0.0;
  std::vector<TuneRecord> evaluations;  // sorted by (r_omega, rho, L)
  std::vector<double> round_best;       // incumbent after the coarse grid and each refinement round
  double wall_time = 0.0;               // seconds
};

/// Minimises ||R||^2 over (r_omega, rho, L): coarse grid, then local refinement
/// around the incumbent. Throws ConvergenceFailure if no candidate converges.
TuneResult tune(const ModelParams& params, int n, const TuneGrid& grid,
                const TuneOptions& options = {});

/// Solves one candidate and measures its residual norm; never throws for solver failures.
TuneRecord evaluate_candidate(const ModelParams& params, const CollocationConfig& config,
                              int quadrature_order = 0);

}  // namespace csrbf
