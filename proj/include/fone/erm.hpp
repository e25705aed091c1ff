#pragma once

#include <cstdint>
#include <limits>

#include <Eigen/Core>

#include "fone/datagen.hpp"
#include "fone/dataset.hpp"
#include "fone/model.hpp"

namespace fone {

struct ErmOptions {
  // Smooth models: gradient-norm target. Quantile: minimum improvement of
  // the window-averaged objective per window; anything less terminates.
  double tol = 1e-8;
  Index max_iter = 50'000;
  // Quantile subgradient descent uses steps c/sqrt(t) and reports the
  // average of the trailing `window` iterates.
  double quantile_step_c = 0.5;
  Index window = 100;
};

struct ErmResult {
  Eigen::VectorXd theta_hat;
  double final_grad_norm = std::numeric_limits<double>::quiet_NaN();
  Index iterations = 0;
  bool converged = false;
  // Logistic with all responses identical has no finite minimizer; the solve
  // still runs (and stalls) but the condition is surfaced here.
  bool degenerate_responses = false;
  // Quantile diagnostics: fraction of strictly negative residuals at
  // theta_hat, which for an exact minimizer lies within (p+1)/n of tau.
  double neg_residual_fraction = std::numeric_limits<double>::quiet_NaN();
  bool residual_sign_ok = true;
};

// Deterministic full-batch solve of the empirical risk: gradient descent
// with backtracking line search (smooth), averaged subgradient descent
// (quantile). Starts from the zero vector.
ErmResult solve_erm(const LossModel& model, const Dataset& data, const ErmOptions& options = {});

inline ErmResult solve_erm(const LossModel& model, const Dataset& data, double tol,
                           Index max_iter) {
  ErmOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  return solve_erm(model, data, o);
}

inline Index default_n0(Index p) { return 10 * p; }

// Consistent initial estimator: ERM on n0 fresh samples drawn from the
// problem's own data-generating process under the given independent seed.
Eigen::VectorXd initial_estimator(const GeneratedProblem& context, Index n0, std::uint64_t seed,
                                  const ErmOptions& options = {});

}  // namespace fone
