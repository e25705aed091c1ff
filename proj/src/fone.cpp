#include "fone/fone.hpp"

#include <cmath>
#include <vector>

#include "fone/rng.hpp"

namespace fone {

FoneOutput run_fone(const LossModel& model, const Dataset& data, const Eigen::VectorXd& theta0,
                    const Eigen::VectorXd& a, const FoneConfig& config, EvalCounter* counter) {
  const Index n = data.n();
  const Index p = data.dim();
  if (theta0.size() != p || a.size() != p)
    throw std::invalid_argument("run_fone: dimension mismatch");
  if (!theta0.allFinite() || !a.allFinite())
    throw std::invalid_argument("run_fone: non-finite input");
  if (!(config.eta > 0.0)) throw std::invalid_argument("run_fone: eta must be positive");
  if (config.T < 1) throw std::invalid_argument("run_fone: T must be >= 1");
  if (config.m < 1) throw std::invalid_argument("run_fone: m must be >= 1");
  if (config.m > n) throw std::invalid_argument("run_fone: m > n");

  // g_B(z_0) only needs the margins at theta0, so they are computed once.
  const Eigen::VectorXd u0 = data.x * theta0;

  const double guard = 1e6 * (1.0 + a.norm());
  Eigen::VectorXd z = theta0;
  Eigen::VectorXd delta(p);
  std::vector<Index> batch;
  Rng rng(config.seed);

  for (Index t = 1; t <= config.T; ++t) {
    rng.sample_distinct(n, config.m, batch);
    delta.setZero();
    for (const Index i : batch) {
      const auto row = data.x.row(i);
      const double y = data.y(i);
      const double c =
          subgradient_coeff(model, row.dot(z), y) - subgradient_coeff(model, u0(i), y);
      delta.noalias() += c * row.transpose();
    }
    if (counter) counter->subgradient_evals += 2 * static_cast<std::uint64_t>(config.m);
    delta /= static_cast<double>(config.m);
    delta += a;
    z.noalias() -= config.eta * delta;

    if (!z.allFinite())
      throw FoneDivergenceError(t, "run_fone: non-finite iterate at iteration " +
                                       std::to_string(t) + " (eta too large?)");
    if ((z - theta0).norm() > guard)
      throw FoneDivergenceError(t, "run_fone: divergence guard tripped at iteration " +
                                       std::to_string(t) + " (eta too large?)");
  }

  FoneOutput out;
  out.z_T = z;
  out.theta_fone = theta0 - z;
  return out;
}

Eigen::VectorXd estimate_sigma_inv_w(const LossModel& model, const Dataset& data,
                                     const Eigen::VectorXd& theta0, const Eigen::VectorXd& w,
                                     double tau_n, const FoneConfig& config,
                                     EvalCounter* counter) {
  if (std::abs(w.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("estimate_sigma_inv_w: w must be a unit vector");
  if (!(tau_n > 0.0)) throw std::invalid_argument("estimate_sigma_inv_w: tau_n must be positive");
  const FoneOutput out = run_fone(model, data, theta0, tau_n * w, config, counter);
  return out.theta_fone / tau_n;
}

Eigen::VectorXd estimate_sigma_inv_w_refined(const LossModel& model, const Dataset& data,
                                             const Eigen::VectorXd& theta0,
                                             const Eigen::VectorXd& w, double tau_n,
                                             const FoneConfig& config, EvalCounter* counter) {
  if (std::abs(w.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("estimate_sigma_inv_w_refined: w must be a unit vector");
  if (!(tau_n > 0.0))
    throw std::invalid_argument("estimate_sigma_inv_w_refined: tau_n must be positive");

  FoneConfig run = config;
  auto secant = [&](double t, std::uint64_t salt) -> Eigen::VectorXd {
    run.seed = derive_seed(config.seed, salt);
    const FoneOutput out = run_fone(model, data, theta0, t * w, run, counter);
    return out.theta_fone / t;
  };
  const Eigen::VectorXd central_full = 0.5 * (secant(tau_n, 1) + secant(-tau_n, 2));
  const Eigen::VectorXd central_half = 0.5 * (secant(tau_n / 2.0, 3) + secant(-tau_n / 2.0, 4));
  return (4.0 * central_half - central_full) / 3.0;
}

double estimate_limiting_variance(const LossModel& model, const Dataset& data,
                                  const Eigen::VectorXd& theta0, const Eigen::VectorXd& v) {
  const Index n = data.n();
  if (theta0.size() != data.dim() || v.size() != data.dim())
    throw std::invalid_argument("estimate_limiting_variance: dimension mismatch");
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const auto row = data.x.row(i);
    const double c = subgradient_coeff(model, row.dot(theta0), data.y(i));
    const double inner = c * row.dot(v);
    acc += inner * inner;
  }
  return acc / static_cast<double>(n);
}

double default_tau_n(const LossModel& model, Index p, Index n) {
  const double ratio = static_cast<double>(p) * std::log(static_cast<double>(n)) /
                       static_cast<double>(n);
  return model.smooth() ? std::sqrt(ratio) : std::cbrt(ratio);
}

double default_inference_eta(const LossModel& model, Index p, Index n) {
  const double ratio = static_cast<double>(p) * std::log(static_cast<double>(n)) /
                       static_cast<double>(n);
  return model.smooth() ? ratio : std::pow(ratio, 2.0 / 3.0);
}

Index default_inference_T(const LossModel& model, Index p, Index n) {
  const double ln = std::log(static_cast<double>(n));
  return static_cast<Index>(std::ceil(ln * ln / default_inference_eta(model, p, n)));
}

}  // namespace fone
