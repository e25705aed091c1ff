#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "fone/design.hpp"
#include "fone/model.hpp"

namespace fone {

enum class OracleSource { ClosedForm, MonteCarlo };

// Population curvature Sigma = d/dtheta E g(theta,xi) at theta*, and
// A = E[g(theta*,xi) g(theta*,xi)']. Closed forms under the Gaussian design:
//   quantile   Sigma = pdf(ppf(tau)) E[xx'],  A = tau(1-tau) E[xx']
//   quadratic  Sigma = E[xx'],                A = sigma_eps^2 E[xx']  (unit noise)
//   logistic   Sigma(theta*) = E[xx' s(x'theta*)], s(u) = 1/((1+e^u)(1+e^-u)),
//              estimated by Monte Carlo; A shares the integrand because
//              E[c^2|x] = s(u) for the +/-1 response model.
struct PopulationOracle {
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd a_matrix;
  OracleSource source = OracleSource::ClosedForm;
  std::int64_t mc_draws = 0;
  // Standard error of the Monte Carlo probe v' Sigma v, v = 1/sqrt(p).
  double mc_standard_error = 0.0;
};

struct OracleOptions {
  std::int64_t mc_draws = 1'000'000;
  std::uint64_t mc_seed = 0x0eac1eULL;
};

// Throws on invalid design, mc_draws < 1e4 (logistic), or if the numeric
// SPD / PSD checks on the assembled matrices fail.
PopulationOracle population_oracle(const LossModel& model, const DesignSpec& design,
                                   const Eigen::VectorXd& theta_star,
                                   const OracleOptions& options = {});

}  // namespace fone
