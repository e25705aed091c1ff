#include "fone/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "fone/rng.hpp"
#include "fone/stats.hpp"

namespace fone {

namespace {

constexpr Index kChunk = 16384;

}  // namespace

Dataset generate_samples(const LossModel& model, const DesignSpec& design,
                         const Eigen::VectorXd& theta_raw, Index n, std::uint64_t seed) {
  validate(design);
  if (n < 1) throw std::invalid_argument("generate_samples: n must be >= 1");
  if (theta_raw.size() != design.p)
    throw std::invalid_argument("generate_samples: theta_raw dimension does not match design");

  const Index p = design.p;
  const bool identity = (design.covariance == CovKind::Identity || design.varsigma == 0.0);
  const Eigen::MatrixXd chol_t =
      identity ? Eigen::MatrixXd() : Eigen::MatrixXd(cholesky_factor(design).transpose());

  Rng cov_rng(derive_seed(seed, 2));
  Rng resp_rng(derive_seed(seed, 3));

  Dataset data;
  data.x.resize(n, p);
  data.y.resize(n);
  data.x.col(0).setOnes();

  RowMatrixXd g(kChunk, p - 1);
  for (Index r0 = 0; r0 < n; r0 += kChunk) {
    const Index rows = std::min(kChunk, n - r0);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < p - 1; ++j) g(i, j) = cov_rng.normal();
    if (identity)
      data.x.block(r0, 1, rows, p - 1) = g.topRows(rows);
    else
      data.x.block(r0, 1, rows, p - 1).noalias() = g.topRows(rows) * chol_t;

    // Responses see x'theta_raw: the quantile model adds noise around the
    // unshifted coefficient, which is exactly theta_star for the others.
    const Eigen::VectorXd u = data.x.middleRows(r0, rows) * theta_raw;
    switch (model.kind) {
      case LossKind::Logistic:
        for (Index i = 0; i < rows; ++i) {
          const double p1 = 1.0 / (1.0 + std::exp(-u(i)));
          data.y(r0 + i) = (resp_rng.uniform() < p1) ? 1.0 : -1.0;
        }
        break;
      case LossKind::Quantile:
      case LossKind::Quadratic:
        for (Index i = 0; i < rows; ++i) data.y(r0 + i) = u(i) + resp_rng.normal();
        break;
    }
  }
  return data;
}

GeneratedProblem generate_problem(LossKind kind, const DesignSpec& design, Index n,
                                  std::optional<double> tau, std::uint64_t seed,
                                  const Eigen::VectorXd* fixed_theta_raw) {
  validate(design);
  if (n < 1) throw std::invalid_argument("generate_problem: n must be >= 1");
  if (kind == LossKind::Quantile && !tau.has_value())
    throw std::invalid_argument("generate_problem: quantile requires tau");
  if (kind != LossKind::Quantile && tau.has_value())
    throw std::invalid_argument("generate_problem: tau given for a non-quantile model");

  const LossModel model = (kind == LossKind::Quantile) ? LossModel::quantile(*tau)
                          : (kind == LossKind::Logistic) ? LossModel::logistic()
                                                         : LossModel::quadratic();

  GeneratedProblem problem;
  problem.model = model;
  problem.design = design;
  problem.seed = seed;

  if (fixed_theta_raw) {
    if (fixed_theta_raw->size() != design.p)
      throw std::invalid_argument("generate_problem: fixed theta_raw has wrong dimension");
    if (fixed_theta_raw->cwiseAbs().maxCoeff() > 0.5)
      throw std::invalid_argument("generate_problem: theta_raw must lie in [-0.5, 0.5]^p");
    problem.theta_raw = *fixed_theta_raw;
  } else {
    Rng theta_rng(derive_seed(seed, 1));
    problem.theta_raw.resize(design.p);
    for (Index j = 0; j < design.p; ++j) problem.theta_raw(j) = theta_rng.uniform() - 0.5;
  }

  problem.theta_star = problem.theta_raw;
  if (kind == LossKind::Quantile) problem.theta_star(0) += norm_ppf(model.tau);

  problem.data = generate_samples(model, design, problem.theta_raw, n, seed);
  return problem;
}

}  // namespace fone
