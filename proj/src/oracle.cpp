#include "fone/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "fone/rng.hpp"
#include "fone/stats.hpp"

namespace fone {

namespace {

void check_spd(const Eigen::MatrixXd& m, const char* name, bool strictly) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string("oracle: eigen decomposition failed for ") + name);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  const double tol = 1e-10 * std::max(1.0, hi);
  if (strictly ? (lo <= tol) : (lo < -tol))
    throw std::runtime_error(std::string("oracle: ") + name +
                             (strictly ? " is not positive definite" : " is not PSD"));
}

PopulationOracle logistic_monte_carlo(const DesignSpec& design, const Eigen::VectorXd& theta_star,
                                      const OracleOptions& options) {
  if (options.mc_draws < 10'000)
    throw std::invalid_argument("oracle: Monte Carlo sample count must be >= 1e4");
  const Index p = design.p;
  const Eigen::MatrixXd chol = cholesky_factor(design);
  const bool identity = (design.covariance == CovKind::Identity || design.varsigma == 0.0);

  Rng rng(options.mc_seed);
  Eigen::MatrixXd w_sum = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd x(p);
  Eigen::VectorXd z(p - 1);
  const Eigen::VectorXd probe = Eigen::VectorXd::Constant(p, 1.0 / std::sqrt(double(p)));

  // Welford accumulation of the probe statistic s_i = weight * (x'v)^2,
  // whose mean is v' Sigma v; reported as the oracle's standard error.
  double probe_mean = 0.0, probe_m2 = 0.0;

  x(0) = 1.0;
  for (std::int64_t i = 0; i < options.mc_draws; ++i) {
    for (Index j = 0; j < p - 1; ++j) z(j) = rng.normal();
    if (identity)
      x.tail(p - 1) = z;
    else
      x.tail(p - 1).noalias() = chol * z;
    const double u = x.dot(theta_star);
    // s(u) = sigma(u) sigma(-u), evaluated overflow-safe.
    const double au = std::abs(u);
    const double e = std::exp(-au);
    const double su = e / ((1.0 + e) * (1.0 + e));
    w_sum.selfadjointView<Eigen::Lower>().rankUpdate(x, su);

    const double stat = su * x.dot(probe) * x.dot(probe);
    const double d = stat - probe_mean;
    probe_mean += d / static_cast<double>(i + 1);
    probe_m2 += d * (stat - probe_mean);
  }

  PopulationOracle oracle;
  oracle.sigma = Eigen::MatrixXd(w_sum.selfadjointView<Eigen::Lower>()) /
                 static_cast<double>(options.mc_draws);
  oracle.a_matrix = oracle.sigma;
  oracle.source = OracleSource::MonteCarlo;
  oracle.mc_draws = options.mc_draws;
  const double n = static_cast<double>(options.mc_draws);
  oracle.mc_standard_error = std::sqrt(probe_m2 / (n - 1.0) / n);
  return oracle;
}

}  // namespace

PopulationOracle population_oracle(const LossModel& model, const DesignSpec& design,
                                   const Eigen::VectorXd& theta_star,
                                   const OracleOptions& options) {
  validate(design);
  if (theta_star.size() != design.p)
    throw std::invalid_argument("oracle: theta_star dimension does not match design");

  PopulationOracle oracle;
  switch (model.kind) {
    case LossKind::Quantile: {
      const Eigen::MatrixXd m = second_moment_matrix(design);
      const double density = norm_pdf(norm_ppf(model.tau));
      oracle.sigma = density * m;
      oracle.a_matrix = model.tau * (1.0 - model.tau) * m;
      oracle.source = OracleSource::ClosedForm;
      break;
    }
    case LossKind::Quadratic: {
      const Eigen::MatrixXd m = second_moment_matrix(design);
      oracle.sigma = m;
      oracle.a_matrix = m;  // unit noise variance
      oracle.source = OracleSource::ClosedForm;
      break;
    }
    case LossKind::Logistic:
      oracle = logistic_monte_carlo(design, theta_star, options);
      break;
  }

  check_spd(oracle.sigma, "sigma", /*strictly=*/true);
  check_spd(oracle.a_matrix, "a_matrix", /*strictly=*/false);
  return oracle;
}

}  // namespace fone
