#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "fone/dataset.hpp"

namespace fone {

enum class LossKind { Logistic, Quantile, Quadratic };

// Loss family f(theta, xi) with subgradient g(theta, xi) = c(x'theta, y) * x:
//   logistic   f = log(1+exp(-y x'theta)),        c = -y / (1 + exp(y x'theta))
//   quantile   f = (y-x'theta)(tau - 1{y-x'theta<=0}), c = 1{y <= x'theta} - tau
//   quadratic  f = 0.5 (y-x'theta)^2,              c = x'theta - y
// The quantile indicator is non-strict (ties count as 1). Quadratic is the
// oracle family: its subgradient is linear in theta, which makes several
// iterative procedures exactly checkable against direct linear solves.
struct LossModel {
  LossKind kind = LossKind::Logistic;
  double tau = 0.5;  // quantile level; meaningful only for Quantile

  static LossModel logistic() { return LossModel{LossKind::Logistic, 0.5}; }
  static LossModel quantile(double tau);
  static LossModel quadratic() { return LossModel{LossKind::Quadratic, 0.5}; }

  bool smooth() const { return kind != LossKind::Quantile; }
};

// Opt-in instrumentation: batch kernels add one count per per-sample
// subgradient evaluation. Used by tests to pin data-locality contracts.
struct EvalCounter {
  std::uint64_t subgradient_evals = 0;
};

// Scalar weight c(u, y) with g = c * x, u = x'theta.
double subgradient_coeff(const LossModel& model, double u, double y);

// Per-sample loss at a precomputed margin u = x'theta.
double loss_from_u(const LossModel& model, double u, double y);

// Per-sample operations (convenience API; hot paths use the batch kernels).
double loss(const LossModel& model, const Eigen::VectorXd& theta, const Sample& sample);
Eigen::VectorXd subgradient(const LossModel& model, const Eigen::VectorXd& theta,
                            const Sample& sample);

// (1/|idx|) sum of subgradients over idx; throws on an empty index set.
Eigen::VectorXd averaged_subgradient(const LossModel& model, const Dataset& data,
                                     const Eigen::VectorXd& theta, std::span<const Index> idx,
                                     EvalCounter* counter = nullptr);
// Full-sample average, computed as sum_subgradient / n.
Eigen::VectorXd averaged_subgradient(const LossModel& model, const Dataset& data,
                                     const Eigen::VectorXd& theta, EvalCounter* counter = nullptr);
// Unnormalized full-sample sum (the per-machine quantity a coordinator sums).
Eigen::VectorXd sum_subgradient(const LossModel& model, const Dataset& data,
                                const Eigen::VectorXd& theta, EvalCounter* counter = nullptr);

double average_loss(const LossModel& model, const Dataset& data, const Eigen::VectorXd& theta);

// One fused pass producing the empirical risk and its mean subgradient.
void objective_and_gradient(const LossModel& model, const Dataset& data,
                            const Eigen::VectorXd& theta, double* objective,
                            Eigen::VectorXd* gradient);

}  // namespace fone
