#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "csrbf/errors.hpp"
#include "csrbf/tuner.hpp"

namespace csrbf {
namespace {

void expect_consistent(const TuneResult& result) {
  double minimum = std::numeric_limits<double>::infinity();
  for (const TuneRecord& rec : result.evaluations) {
    EXPECT_GE(rec.norm_sq, 0.0);
    if (rec.converged) minimum = std::min(minimum, rec.norm_sq);
  }
  EXPECT_EQ(result.best_norm_sq, minimum);
  EXPECT_TRUE(std::is_sorted(result.evaluations.begin(), result.evaluations.end(),
                             [](const TuneRecord& a, const TuneRecord& b) {
                               return std::tie(a.r_omega, a.rho, a.length) <
                                      std::tie(b.r_omega, b.rho, b.length);
                             }));
  for (std::size_t i = 1; i < result.round_best.size(); ++i) {
    EXPECT_LE(result.round_best[i], result.round_best[i - 1]);
  }
  EXPECT_GE(result.wall_time, 0.0);
}

TEST(Tuner, DefaultGrid) {
  const TuneGrid grid = default_tune_grid(make_params(0.1, 0.1));
  EXPECT_EQ(grid.r_omegas, (std::vector<double>{0.5, 1.0, 1.5, 2.0, 3.0}));
  ASSERT_EQ(grid.rhos.size(), 21u);
  EXPECT_DOUBLE_EQ(grid.rhos.front(), 1.0);
  EXPECT_DOUBLE_EQ(grid.rhos.back(), 2.0);
  EXPECT_EQ(grid.lengths, (std::vector<double>{1, 2, 3, 5, 8, 10}));
  EXPECT_EQ(default_tune_grid(make_params(0.02, 0.1)).lengths, (std::vector<double>{1, 2, 3, 5, 8, 10}));
}

TEST(Tuner, SinglePointGrid) {
  const ModelParams params = make_params(0.2, 0.1);
  TuneOptions options;
  options.refine_rounds = 0;
  const TuneResult result = tune(params, 18, TuneGrid{{2.0}, {1.03277}, {1.0}}, options);
  ASSERT_EQ(result.evaluations.size(), 1u);
  EXPECT_EQ(result.best_config.r_omega, 2.0);
  EXPECT_EQ(result.best_config.rho, 1.03277);
  EXPECT_EQ(result.best_config.length, 1.0);
  CollocationConfig config = options.base;
  config.n = 18;
  config.r_omega = 2.0;
  config.rho = 1.03277;
  config.length = 1.0;
  EXPECT_EQ(result.best_norm_sq, evaluate_candidate(params, config).norm_sq);
  expect_consistent(result);
}

TEST(Tuner, LargestKappaWithinFactorOfPublished) {
  const TuneResult result = tune(make_params(0.5, 0.1), 27, default_tune_grid(make_params(0.5, 0.1)));
  EXPECT_LE(result.best_norm_sq, 2.11e-6);
  EXPECT_EQ(result.best_config.n, 27);
  expect_consistent(result);
}

TEST(Tuner, SmallestKappaWithinFactorOfPublished) {
  const TuneResult result = tune(make_params(0.02, 0.1), 15, default_tune_grid(make_params(0.02, 0.1)));
  EXPECT_LE(result.best_norm_sq, 4.41e-3);
  expect_consistent(result);
}

TEST(Tuner, DeterministicAcrossThreadCounts) {
  const ModelParams params = make_params(0.1, 0.1);
  const TuneGrid grid{{1.0, 2.0}, {1.2, 1.5, 1.8}, {1.0, 2.0}};
  TuneOptions serial;
  serial.threads = 1;
  TuneOptions pooled;
  pooled.threads = 4;
  const TuneResult a = tune(params, 18, grid, serial);
  const TuneResult b = tune(params, 18, grid, pooled);
  ASSERT_EQ(a.evaluations.size(), b.evaluations.size());
  for (std::size_t i = 0; i < a.evaluations.size(); ++i) {
    EXPECT_EQ(a.evaluations[i].r_omega, b.evaluations[i].r_omega);
    EXPECT_EQ(a.evaluations[i].rho, b.evaluations[i].rho);
    EXPECT_EQ(a.evaluations[i].length, b.evaluations[i].length);
    EXPECT_EQ(a.evaluations[i].norm_sq, b.evaluations[i].norm_sq);
    EXPECT_EQ(a.evaluations[i].converged, b.evaluations[i].converged);
  }
  EXPECT_EQ(a.best_norm_sq, b.best_norm_sq);
  EXPECT_EQ(a.round_best, b.round_best);
  expect_consistent(a);
}

TEST(Tuner, RefinementNeverWorsensIncumbent) {
  const ModelParams params = make_params(0.2, 0.1);
  TuneOptions options;
  options.refine_rounds = 3;
  options.refine_length = true;
  const TuneResult result = tune(params, 18, TuneGrid{{1.0, 2.0}, {1.0, 1.5}, {1.0, 3.0}}, options);
  EXPECT_EQ(result.round_best.size(), 4u);
  expect_consistent(result);
}

TEST(Tuner, NoConvergedCandidateThrows) {
  TuneOptions options;
  options.refine_rounds = 0;
  options.base.newton_max_iters = 0;
  EXPECT_THROW(tune(make_params(0.1, 0.1), 18, TuneGrid{{1.0}, {1.5}, {1.0, 2.0}}, options),
               ConvergenceFailure);
}

TEST(Tuner, NonConvergedCandidateIsMeasuredButNeverChosen) {
  CollocationConfig config;
  config.newton_max_iters = 0;
  const TuneRecord rec = evaluate_candidate(make_params(0.1, 0.1), config);
  EXPECT_FALSE(rec.converged);
  EXPECT_GT(rec.norm_sq, 0.0);

  // at these settings only L = 8 converges
  const ModelParams params = make_params(0.02, 0.1);
  TuneOptions options;
  options.refine_rounds = 0;
  const TuneResult result = tune(params, 15, TuneGrid{{1.0}, {1.766}, {1.0, 2.0, 8.0}}, options);
  EXPECT_EQ(result.best_config.length, 8.0);
  for (const TuneRecord& r : result.evaluations) {
    if (!r.converged) EXPECT_NE(r.length, result.best_config.length);
  }
  expect_consistent(result);
}

}  // namespace
}  // namespace csrbf
