#include "fone/sgd.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fone/rng.hpp"

namespace fone {

double step_size(Index i, Index p, const SgdSchedule& schedule) {
  if (i < 1 || p < 1) throw std::invalid_argument("step_size: need i >= 1 and p >= 1");
  if (!(schedule.c0 > 0.0)) throw std::invalid_argument("step_size: c0 must be positive");
  if (!(schedule.alpha > 0.0 && schedule.alpha <= 1.0))
    throw std::invalid_argument("step_size: alpha must lie in (0,1]");
  return schedule.c0 /
         std::max(std::pow(static_cast<double>(i), schedule.alpha), static_cast<double>(p));
}

Index default_batch(Index p, Index n) {
  if (p < 1 || n < 1) throw std::invalid_argument("default_batch: need p >= 1 and n >= 1");
  const Index m = static_cast<Index>(std::floor(static_cast<double>(p) *
                                                std::log(static_cast<double>(n))));
  return std::max<Index>(1, std::min(m, n));
}

Eigen::VectorXd run_minibatch_sgd(const LossModel& model, const Dataset& data,
                                  const Eigen::VectorXd& theta0, const SgdConfig& config,
                                  std::uint64_t seed, EvalCounter* counter) {
  const Index n = data.n();
  const Index p = data.dim();
  if (theta0.size() != p) throw std::invalid_argument("run_minibatch_sgd: theta0 dimension");
  if (config.m < 1) throw std::invalid_argument("run_minibatch_sgd: batch size must be >= 1");
  if (config.m > n) throw std::invalid_argument("run_minibatch_sgd: n < m");
  (void)step_size(1, p, config.schedule);  // validates the schedule up front

  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng(seed);
  rng.shuffle(perm);

  const Index s = n / config.m;
  Eigen::VectorXd z = theta0;
  Eigen::VectorXd g(p);
  for (Index i = 1; i <= s; ++i) {
    const std::span<const Index> batch(perm.data() + (i - 1) * config.m,
                                       static_cast<std::size_t>(config.m));
    g = averaged_subgradient(model, data, z, batch, counter);
    z.noalias() -= step_size(i, p, config.schedule) * g;
  }
  return z;
}

}  // namespace fone
