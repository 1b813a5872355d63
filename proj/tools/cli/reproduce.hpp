#pragma once

#include <optional>
#include <vector>

#include "csrbf/collocation.hpp"
#include "csrbf/reference_data.hpp"
#include "csrbf/tuner.hpp"

namespace csrbf::cli {

struct SweepAttempt {
  double length = 0.0;
  bool converged = false;
  std::optional<double> u_max;  // empty when the peak was not captured or the solve failed
};

struct UmaxReproduction {
  reference::UmaxRow published;
  double exact_umax = 0.0;  // closed form
  std::vector<SweepAttempt> attempts;
  std::optional<SolutionExpansion> best;  // closest converged u_max to the closed form
  std::optional<Peak> best_peak;
  bool pass = false;
};

/// Solves one published configuration over the L sweep and keeps the converged
/// solution whose u_max is closest to the closed-form value.
UmaxReproduction reproduce_umax_row(const reference::UmaxRow& row,
                                    const NewtonObserver& observer = {});

std::vector<UmaxReproduction> reproduce_umax_table(unsigned threads = 0);

struct NormReproduction {
  reference::NormRow published;
  int n = 0;
  std::optional<TuneResult> tuned;
  double ratio = 0.0;  // tuned / published
  bool pass = false;
};

NormReproduction reproduce_norm_row(const reference::NormRow& row, const TuneOptions& options = {});

}  // namespace csrbf::cli
