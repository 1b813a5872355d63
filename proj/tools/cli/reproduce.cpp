#include "cli/reproduce.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "csrbf/errors.hpp"
#include "csrbf/model.hpp"

namespace csrbf::cli {

UmaxReproduction reproduce_umax_row(const reference::UmaxRow& row,
                                    const NewtonObserver& observer) {
  UmaxReproduction out;
  out.published = row;
  const ModelParams params = make_params(row.kappa, reference::kInitialValue);
  out.exact_umax = umax_closed_form(params);

  double best_gap = std::numeric_limits<double>::infinity();
  for (double length : reference::kLengthSweep) {
    CollocationConfig config;
    config.n = row.n;
    config.rho = row.rho;
    config.r_omega = row.r_omega;
    config.length = length;

    SweepAttempt attempt;
    attempt.length = length;
    try {
      SolutionExpansion solution = newton_solve(config, params, observer);
      attempt.converged = solution.converged();
      if (attempt.converged) {
        const Peak peak = solution_umax(solution);
        attempt.u_max = peak.u_max;
        const double gap = std::abs(peak.u_max - out.exact_umax);
        if (gap < best_gap) {
          best_gap = gap;
          out.best.emplace(std::move(solution));
          out.best_peak = peak;
        }
      }
    } catch (const PeakNotCaptured&) {
    } catch (const SingularSystem&) {
    }
    out.attempts.push_back(attempt);
  }

  if (out.best_peak) {
    const double u = out.best_peak->u_max;
    out.pass = std::abs(u - row.icsrbf_umax) <= reference::kUmaxTolVsPublished &&
               std::abs(u - out.exact_umax) <= reference::kUmaxTolVsExact;
  }
  return out;
}

std::vector<UmaxReproduction> reproduce_umax_table(unsigned threads) {
  const auto& table = reference::kUmaxTable;
  std::vector<std::optional<UmaxReproduction>> slots(table.size());
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1) {
    for (std::size_t i = 0; i < table.size(); ++i) slots[i] = reproduce_umax_row(table[i]);
  } else {
    std::vector<std::exception_ptr> errors(table.size());
    {
      std::vector<std::jthread> pool;
      for (std::size_t i = 0; i < table.size(); ++i) {
        pool.emplace_back([&, i] {
          try {
            slots[i] = reproduce_umax_row(table[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<UmaxReproduction> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

NormReproduction reproduce_norm_row(const reference::NormRow& row, const TuneOptions& options) {
  NormReproduction out;
  out.published = row;
  for (const auto& u : reference::kUmaxTable) {
    if (u.kappa == row.kappa) out.n = u.n;
  }
  if (out.n == 0) throw std::invalid_argument("no published N for this kappa");
  const ModelParams params = make_params(row.kappa, reference::kInitialValue);
  try {
    out.tuned = tune(params, out.n, default_tune_grid(params), options);
    out.ratio = out.tuned->best_norm_sq / row.norm_sq;
    out.pass = out.tuned->best_norm_sq <= reference::kNormFactor * row.norm_sq;
  } catch (const ConvergenceFailure&) {
    out.ratio = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace csrbf::cli
