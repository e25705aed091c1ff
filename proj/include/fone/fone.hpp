#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "fone/dataset.hpp"
#include "fone/model.hpp"

namespace fone {

// First-order Newton-type estimation of Sigma^{-1} a: stochastic Richardson
// iteration driven by mini-batch subgradient differences, never forming a
// Hessian. Config invariants: eta > 0, 1 <= m <= n, T >= 1.
struct FoneConfig {
  double eta = 0.0;
  Index m = 1;
  Index T = 20;
  std::uint64_t seed = 0;
};

struct FoneOutput {
  Eigen::VectorXd z_T;
  Eigen::VectorXd theta_fone;  // theta0 - z_T, the Sigma^{-1} a estimate
};

// Raised when an iterate goes non-finite or drifts past the divergence
// guard ||z_t - theta0|| > 1e6 (1 + ||a||); carries the failing iteration.
struct FoneDivergenceError : std::runtime_error {
  Index iteration;
  FoneDivergenceError(Index t, const std::string& what)
      : std::runtime_error(what), iteration(t) {}
};

// z_0 = theta0; for t = 1..T draw B_t as m distinct indices uniform over the
// data (independently across t) and update
//   z_t = z_{t-1} - eta ( g_{B_t}(z_{t-1}) - g_{B_t}(z_0) + a ).
// Each iteration evaluates 2m per-sample subgradients (counted if a counter
// is supplied).
FoneOutput run_fone(const LossModel& model, const Dataset& data, const Eigen::VectorXd& theta0,
                    const Eigen::VectorXd& a, const FoneConfig& config,
                    EvalCounter* counter = nullptr);

// Inference direction estimate: run_fone with a = tau_n w, rescaled by
// 1/tau_n. Requires ||w|| = 1 within 1e-12 and tau_n > 0.
Eigen::VectorXd estimate_sigma_inv_w(const LossModel& model, const Dataset& data,
                                     const Eigen::VectorXd& theta0, const Eigen::VectorXd& w,
                                     double tau_n, const FoneConfig& config,
                                     EvalCounter* counter = nullptr);

// Bias-reduced inference direction estimate. The one-shot secant above finds
// the displacement s with G(theta0 - s) = G(theta0) - tau_n w; when the
// subgradient field is curved over ||s|| = tau_n ||Sigma^{-1} w|| (severe for
// quantile designs at desk-scale tau_n), that root carries an O(tau_n)
// relative bias. This variant takes the central difference of two runs with
// a = +/- tau_n w (cancelling even-order field curvature) at step tau_n and
// tau_n / 2, then applies one Richardson extrapolation step
//   v = (4 v_central(tau_n / 2) - v_central(tau_n)) / 3,
// removing the remaining quadratic term. Four run_fone calls, seeded from
// derive_seed(config.seed, 1..4); exact for quadratic losses (linear field).
Eigen::VectorXd estimate_sigma_inv_w_refined(const LossModel& model, const Dataset& data,
                                             const Eigen::VectorXd& theta0,
                                             const Eigen::VectorXd& w, double tau_n,
                                             const FoneConfig& config,
                                             EvalCounter* counter = nullptr);

// Plug-in limiting variance (1/n) sum_i (g(theta0, xi_i)' v)^2, O(np).
double estimate_limiting_variance(const LossModel& model, const Dataset& data,
                                  const Eigen::VectorXd& theta0, const Eigen::VectorXd& v);

// Inference-mode defaults. tau_n: sqrt(p ln n / n) for smooth losses,
// (p ln n / n)^{1/3} for quantile. eta: p ln n / n (smooth),
// (p ln n / n)^{2/3} (quantile). T: ceil((ln n)^2 / eta), large enough that
// the iteration count dominates ln n / eta.
double default_tau_n(const LossModel& model, Index p, Index n);
double default_inference_eta(const LossModel& model, Index p, Index n);
Index default_inference_T(const LossModel& model, Index p, Index n);

}  // namespace fone
