#include "fone/model.hpp"

#include <cmath>
#include <stdexcept>

#include "fone/stats.hpp"

namespace fone {

namespace {

void check_theta(const Dataset& data, const Eigen::VectorXd& theta) {
  if (theta.size() != data.dim())
    throw std::invalid_argument("model: theta dimension does not match data");
  if (!theta.allFinite()) throw std::invalid_argument("model: non-finite theta");
}

}  // namespace

double loss_from_u(const LossModel& model, double u, double y) {
  switch (model.kind) {
    case LossKind::Logistic:
      return log1pexp(-y * u);
    case LossKind::Quantile: {
      const double r = y - u;
      return r * (model.tau - (r <= 0.0 ? 1.0 : 0.0));
    }
    case LossKind::Quadratic: {
      const double r = y - u;
      return 0.5 * r * r;
    }
  }
  return 0.0;  // unreachable
}

LossModel LossModel::quantile(double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("LossModel: quantile tau must lie in (0,1)");
  return LossModel{LossKind::Quantile, tau};
}

double subgradient_coeff(const LossModel& model, double u, double y) {
  switch (model.kind) {
    case LossKind::Logistic:
      // exp may overflow to +inf; 1/(1+inf) = 0 keeps the result finite.
      return -y / (1.0 + std::exp(y * u));
    case LossKind::Quantile:
      return (y <= u ? 1.0 : 0.0) - model.tau;
    case LossKind::Quadratic:
      return u - y;
  }
  return 0.0;  // unreachable
}

double loss(const LossModel& model, const Eigen::VectorXd& theta, const Sample& sample) {
  if (theta.size() != sample.x.size())
    throw std::invalid_argument("loss: theta dimension does not match sample");
  if (!theta.allFinite() || !sample.x.allFinite() || !std::isfinite(sample.y))
    throw std::invalid_argument("loss: non-finite input");
  return loss_from_u(model, sample.x.dot(theta), sample.y);
}

Eigen::VectorXd subgradient(const LossModel& model, const Eigen::VectorXd& theta,
                            const Sample& sample) {
  if (theta.size() != sample.x.size())
    throw std::invalid_argument("subgradient: theta dimension does not match sample");
  if (!theta.allFinite() || !sample.x.allFinite() || !std::isfinite(sample.y))
    throw std::invalid_argument("subgradient: non-finite input");
  return subgradient_coeff(model, sample.x.dot(theta), sample.y) * sample.x;
}

Eigen::VectorXd averaged_subgradient(const LossModel& model, const Dataset& data,
                                     const Eigen::VectorXd& theta, std::span<const Index> idx,
                                     EvalCounter* counter) {
  check_theta(data, theta);
  if (idx.empty()) throw std::invalid_argument("averaged_subgradient: empty index set");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.dim());
  for (const Index i : idx) {
    if (i < 0 || i >= data.n())
      throw std::out_of_range("averaged_subgradient: index out of range");
    const auto row = data.x.row(i);
    const double c = subgradient_coeff(model, row.dot(theta), data.y(i));
    g.noalias() += c * row.transpose();
  }
  if (counter) counter->subgradient_evals += idx.size();
  return g / static_cast<double>(idx.size());
}

Eigen::VectorXd sum_subgradient(const LossModel& model, const Dataset& data,
                                const Eigen::VectorXd& theta, EvalCounter* counter) {
  check_theta(data, theta);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.dim());
  for (Index i = 0; i < data.n(); ++i) {
    const auto row = data.x.row(i);
    const double c = subgradient_coeff(model, row.dot(theta), data.y(i));
    g.noalias() += c * row.transpose();
  }
  if (counter) counter->subgradient_evals += static_cast<std::uint64_t>(data.n());
  return g;
}

Eigen::VectorXd averaged_subgradient(const LossModel& model, const Dataset& data,
                                     const Eigen::VectorXd& theta, EvalCounter* counter) {
  return sum_subgradient(model, data, theta, counter) / static_cast<double>(data.n());
}

double average_loss(const LossModel& model, const Dataset& data, const Eigen::VectorXd& theta) {
  check_theta(data, theta);
  double s = 0.0;
  for (Index i = 0; i < data.n(); ++i)
    s += loss_from_u(model, data.x.row(i).dot(theta), data.y(i));
  return s / static_cast<double>(data.n());
}

void objective_and_gradient(const LossModel& model, const Dataset& data,
                            const Eigen::VectorXd& theta, double* objective,
                            Eigen::VectorXd* gradient) {
  check_theta(data, theta);
  double s = 0.0;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.dim());
  for (Index i = 0; i < data.n(); ++i) {
    const auto row = data.x.row(i);
    const double u = row.dot(theta);
    const double y = data.y(i);
    s += loss_from_u(model, u, y);
    g.noalias() += subgradient_coeff(model, u, y) * row.transpose();
  }
  const double inv_n = 1.0 / static_cast<double>(data.n());
  if (objective) *objective = s * inv_n;
  if (gradient) *gradient = g * inv_n;
}

}  // namespace fone
