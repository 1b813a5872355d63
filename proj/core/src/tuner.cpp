#include "csrbf/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "csrbf/errors.hpp"

namespace csrbf {
namespace {

using Key = std::tuple<double, double, double>;  // (r_omega, rho, L)

Key key_of(const TuneRecord& r) { return {r.r_omega, r.rho, r.length}; }

bool better(const TuneRecord& a, const TuneRecord& b) {
  return std::tie(a.norm_sq, a.r_omega, a.rho, a.length) <
         std::tie(b.norm_sq, b.r_omega, b.rho, b.length);
}

// Evaluates candidates on a small worker pool; output order matches input order.
std::vector<TuneRecord> evaluate_all(const ModelParams& params, int n,
                                     const std::vector<Key>& candidates,
                                     const TuneOptions& options) {
  std::vector<TuneRecord> out(candidates.size());
  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::max<std::size_t>(1, candidates.size())));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < candidates.size(); i = next++) {
      CollocationConfig config = options.base;
      config.n = n;
      std::tie(config.r_omega, config.rho, config.length) = candidates[i];
      out[i] = evaluate_candidate(params, config, options.quadrature_order);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

std::string describe(const TuneGrid& grid) {
  std::ostringstream os;
  const auto list = [&os](const char* name, const std::vector<double>& v) {
    os << name << "={";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "} ";
  };
  list("r_omega", grid.r_omegas);
  list("rho", grid.rhos);
  list("L", grid.lengths);
  return os.str();
}

}  // namespace

TuneGrid default_tune_grid(const ModelParams& params) {
  TuneGrid grid;
  grid.r_omegas = {0.5, 1.0, 1.5, 2.0, 3.0};
  for (int i = 0; i <= 20; ++i) grid.rhos.push_back(1.0 + 0.05 * i);
  grid.lengths = {default_length(params.kappa), 1.0, 2.0, 3.0, 5.0, 8.0, 10.0};
  std::sort(grid.lengths.begin(), grid.lengths.end());
  grid.lengths.erase(std::unique(grid.lengths.begin(), grid.lengths.end()), grid.lengths.end());
  return grid;
}

TuneRecord evaluate_candidate(const ModelParams& params, const CollocationConfig& config,
                              int quadrature_order) {
  TuneRecord record{config.r_omega, config.rho, config.length,
                    std::numeric_limits<double>::infinity(), false};
  try {
    const SolutionExpansion solution = newton_solve(config, params);
    const double norm = solution_residual_norm_sq(solution, quadrature_order);
    record.norm_sq = norm;
    record.converged = solution.converged();
  } catch (const std::exception&) {
    // singular Jacobian or non-finite residual: recorded as a failed candidate
  }
  return record;
}

TuneResult tune(const ModelParams& params, int n, const TuneGrid& grid,
                const TuneOptions& options) {
  if (n < 2) throw std::invalid_argument("N must be >= 2");
  if (grid.r_omegas.empty() || grid.rhos.empty() || grid.lengths.empty()) {
    throw std::invalid_argument("tuning grid ranges must be nonempty");
  }
  if (options.refine_rounds < 0) throw std::invalid_argument("refine_rounds must be >= 0");
  const auto start = std::chrono::steady_clock::now();

  std::set<Key> seen;
  std::vector<TuneRecord> records;
  std::vector<Key> batch;
  for (double rw : grid.r_omegas)
    for (double rho : grid.rhos)
      for (double len : grid.lengths)
        if (seen.insert({rw, rho, len}).second) batch.emplace_back(rw, rho, len);

  TuneResult result;
  const TuneRecord* incumbent = nullptr;
  auto absorb = [&](std::vector<TuneRecord> fresh) {
    records.insert(records.end(), fresh.begin(), fresh.end());
    incumbent = nullptr;
    for (const TuneRecord& r : records) {
      if (r.converged && std::isfinite(r.norm_sq) && (!incumbent || better(r, *incumbent))) {
        incumbent = &r;
      }
    }
  };

  absorb(evaluate_all(params, n, batch, options));
  if (!incumbent) {
    throw ConvergenceFailure("no tuning candidate converged; grid: " + describe(grid));
  }
  result.round_best.push_back(incumbent->norm_sq);

  double rw_step = options.r_omega_step;
  double rho_step = options.rho_step;
  double len_step = options.length_step;
  for (int round = 0; round < options.refine_rounds; ++round) {
    const Key centre = key_of(*incumbent);
    batch.clear();
    const int len_span = options.refine_length ? 1 : 0;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        for (int c = -len_span; c <= len_span; ++c) {
          const double rw = std::get<0>(centre) + a * rw_step;
          const double rho = std::get<1>(centre) + b * rho_step;
          const double len = std::get<2>(centre) + c * len_step;
          if (rw <= 0.0 || rho <= 0.0 || len <= 0.0) continue;
          if (seen.insert({rw, rho, len}).second) batch.emplace_back(rw, rho, len);
        }
      }
    }
    absorb(evaluate_all(params, n, batch, options));
    result.round_best.push_back(incumbent->norm_sq);
    rw_step *= 0.5;
    rho_step *= 0.5;
    len_step *= 0.5;
  }

  result.best_config = options.base;
  result.best_config.n = n;
  std::tie(result.best_config.r_omega, result.best_config.rho, result.best_config.length) =
      key_of(*incumbent);
  result.best_norm_sq = incumbent->norm_sq;

  std::sort(records.begin(), records.end(),
            [](const TuneRecord& a, const TuneRecord& b) { return key_of(a) < key_of(b); });
  result.evaluations = std::move(records);
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace csrbf
