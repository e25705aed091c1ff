#include "fone/erm.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Cholesky>

#include "fone/rng.hpp"

namespace fone {

namespace {

double quantile_objective(const LossModel& model, const Dataset& data,
                          const Eigen::VectorXd& theta) {
  return average_loss(model, data, theta);
}

double neg_residual_fraction_at(const Dataset& data, const Eigen::VectorXd& theta) {
  Index neg = 0;
  for (Index i = 0; i < data.n(); ++i)
    if (data.y(i) - data.x.row(i).dot(theta) < 0.0) ++neg;
  return static_cast<double>(neg) / static_cast<double>(data.n());
}

// Curvature weight of the smooth losses: f''(u) with u = x'theta.
double curvature_weight(const LossModel& model, double u) {
  if (model.kind == LossKind::Quadratic) return 1.0;
  // Logistic: sigma'(u) = e / (1+e)^2 with e = exp(-|u|), exact and
  // overflow-free on both tails.
  const double e = std::exp(-std::abs(u));
  const double d = 1.0 + e;
  return e / (d * d);
}

// One pass producing the empirical risk, mean gradient, and mean Hessian
// (lower triangle) at theta. The Hessian accumulates chunk-wise as
// (sqrt(W) X_chunk)' (sqrt(W) X_chunk), which keeps the O(n p^2) work in
// matrix-matrix form.
void newton_ingredients(const LossModel& model, const Dataset& data,
                        const Eigen::VectorXd& theta, double* obj, Eigen::VectorXd* grad,
                        Eigen::MatrixXd* hess) {
  const Index n = data.n();
  const Index p = data.dim();
  constexpr Index kChunk = 8192;
  grad->setZero(p);
  hess->setZero(p, p);
  double total = 0.0;
  RowMatrixXd scaled(std::min(kChunk, n), p);
  for (Index start = 0; start < n; start += kChunk) {
    const Index rows = std::min(kChunk, n - start);
    for (Index k = 0; k < rows; ++k) {
      const Index i = start + k;
      const auto row = data.x.row(i);
      const double u = row.dot(theta);
      const double y = data.y(i);
      total += loss_from_u(model, u, y);
      const double c = subgradient_coeff(model, u, y);
      grad->noalias() += c * row.transpose();
      scaled.row(k) = std::sqrt(curvature_weight(model, u)) * row;
    }
    hess->selfadjointView<Eigen::Lower>().rankUpdate(
        scaled.topRows(rows).transpose());
  }
  *obj = total / static_cast<double>(n);
  *grad /= static_cast<double>(n);
  *hess /= static_cast<double>(n);
}

ErmResult solve_smooth(const LossModel& model, const Dataset& data, const ErmOptions& options) {
  const Index n = data.n();
  const Index p = data.dim();
  ErmResult result;
  result.theta_hat = Eigen::VectorXd::Zero(p);

  if (model.kind == LossKind::Logistic) {
    const double y0 = data.y(0);
    bool all_same = true;
    for (Index i = 1; i < n && all_same; ++i) all_same = (data.y(i) == y0);
    result.degenerate_responses = all_same;  // separable: no finite minimizer
  }

  // Damped Newton: quadratic loss converges in one step, logistic in a
  // handful; near the optimum the step is accepted on gradient-norm descent
  // so rounding noise in objective differences cannot stall the final
  // decades of convergence (plain descent methods do stall there).
  double obj = 0.0;
  Eigen::VectorXd grad(p), cand_grad(p);
  Eigen::MatrixXd hess(p, p);
  newton_ingredients(model, data, result.theta_hat, &obj, &grad, &hess);
  double gn = grad.norm();
  const double armijo = 1e-4;

  while (gn > options.tol && result.iterations < options.max_iter) {
    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    Eigen::VectorXd direction;
    if (llt.info() == Eigen::Success) {
      direction = llt.solve(grad);
    } else {
      // Numerically non-SPD curvature (e.g. separated logistic data far
      // out): regularize toward gradient descent.
      Eigen::MatrixXd damped = hess;
      const double ridge = std::max(1e-10, 1e-8 * hess.diagonal().maxCoeff());
      damped.diagonal().array() += ridge;
      Eigen::LLT<Eigen::MatrixXd> llt2(damped);
      direction = llt2.info() == Eigen::Success ? llt2.solve(grad).eval() : grad;
    }
    double slope = grad.dot(direction);
    if (!(slope > 0.0)) {  // not a descent direction; fall back to gradient
      direction = grad;
      slope = gn * gn;
    }

    bool accepted = false;
    Eigen::VectorXd cand(p);
    double step = 1.0;
    for (int shrink = 0; shrink < 40; ++shrink) {
      cand = result.theta_hat - step * direction;
      const double cand_obj = average_loss(model, data, cand);
      if (std::isfinite(cand_obj) && cand_obj <= obj - armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Objective differences are at the rounding floor; take the full
      // Newton step iff it still shrinks the gradient.
      cand = result.theta_hat - direction;
      double cand_obj = 0.0;
      Eigen::MatrixXd cand_hess(p, p);
      newton_ingredients(model, data, cand, &cand_obj, &cand_grad, &cand_hess);
      if (cand_grad.norm() < gn) {
        result.theta_hat = cand;
        ++result.iterations;
        obj = cand_obj;
        grad = cand_grad;
        hess = std::move(cand_hess);
        gn = grad.norm();
        continue;
      }
      break;  // no progress possible at working precision
    }
    result.theta_hat = cand;
    ++result.iterations;
    newton_ingredients(model, data, result.theta_hat, &obj, &grad, &hess);
    gn = grad.norm();
  }

  result.final_grad_norm = gn;
  result.converged = (gn <= options.tol);
  return result;
}

// Subgradient descent with steps c/sqrt(t). One fused pass over the data per
// iteration: row i contributes x_i'g to the running margin u_i (advancing it
// to the new iterate) and then its subgradient weight at the new margin to
// the next direction. The returned estimate is the average of the trailing
// window, and the solve stops once that average's objective improves by less
// than tol from one window to the next.
ErmResult solve_quantile(const LossModel& model, const Dataset& data, const ErmOptions& options) {
  const Index n = data.n();
  const Index p = data.dim();
  const Index window = std::max<Index>(1, options.window);

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);  // u_i = x_i' theta, maintained incrementally
  Eigen::VectorXd g(p), g_next(p);

  // Bootstrap direction at theta = 0.
  g.setZero();
  for (Index i = 0; i < n; ++i) {
    const double c = subgradient_coeff(model, 0.0, data.y(i));
    g.noalias() += c * data.x.row(i).transpose();
  }
  g /= static_cast<double>(n);

  Eigen::VectorXd window_sum = Eigen::VectorXd::Zero(p);
  Index window_count = 0;
  Eigen::VectorXd best_avg = theta;
  double prev_obj = quantile_objective(model, data, theta);
  bool stopped = false;
  Index t = 0;

  while (t < options.max_iter && !stopped) {
    ++t;
    const double r = options.quantile_step_c / std::sqrt(static_cast<double>(t));
    theta.noalias() -= r * g;

    g_next.setZero();
    for (Index i = 0; i < n; ++i) {
      const auto row = data.x.row(i);
      u(i) -= r * row.dot(g);
      const double c = subgradient_coeff(model, u(i), data.y(i));
      g_next.noalias() += c * row.transpose();
    }
    g = g_next / static_cast<double>(n);

    window_sum += theta;
    ++window_count;
    if (window_count == window) {
      const Eigen::VectorXd avg = window_sum / static_cast<double>(window);
      const double obj = quantile_objective(model, data, avg);
      best_avg = avg;
      if (prev_obj - obj < options.tol) stopped = true;
      prev_obj = obj;
      window_sum.setZero();
      window_count = 0;
    }
  }

  ErmResult result;
  result.theta_hat =
      (window_count > 0 && !stopped) ? (window_sum / static_cast<double>(window_count)) : best_avg;
  result.iterations = t;
  result.converged = stopped;
  result.final_grad_norm = averaged_subgradient(model, data, result.theta_hat).norm();
  result.neg_residual_fraction = neg_residual_fraction_at(data, result.theta_hat);
  const double slack = static_cast<double>(p + 1) / static_cast<double>(n);
  result.residual_sign_ok = (result.neg_residual_fraction >= model.tau - slack) &&
                            (result.neg_residual_fraction <= model.tau + slack);
  return result;
}

}  // namespace

ErmResult solve_erm(const LossModel& model, const Dataset& data, const ErmOptions& options) {
  validate_dataset(data);
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_erm: tol must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("solve_erm: max_iter must be >= 1");
  if (model.smooth()) return solve_smooth(model, data, options);
  return solve_quantile(model, data, options);
}

Eigen::VectorXd initial_estimator(const GeneratedProblem& context, Index n0, std::uint64_t seed,
                                  const ErmOptions& options) {
  if (n0 < context.design.p)
    throw std::invalid_argument("initial_estimator: n0 must be >= p (under-determined otherwise)");
  const Dataset fresh =
      generate_samples(context.model, context.design, context.theta_raw, n0, seed);
  return solve_erm(context.model, fresh, options).theta_hat;
}

}  // namespace fone
