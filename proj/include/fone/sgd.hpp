#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "fone/dataset.hpp"
#include "fone/model.hpp"

namespace fone {

// Step-size schedule r_i = c0 / max(i^alpha, p): flat at c0/p until
// i^alpha catches up with the dimension, then decaying.
struct SgdSchedule {
  double c0 = 1.0;
  double alpha = 1.0;
};

struct SgdConfig {
  Index m = 1;  // mini-batch size
  SgdSchedule schedule;
};

double step_size(Index i, Index p, const SgdSchedule& schedule);

// Mini-batch size heuristic floor(p ln n) for a machine holding n samples.
Index default_batch(Index p, Index n);

// One pass of mini-batch SGD: a seeded permutation of 1..n is cut into
// s = floor(n/m) consecutive batches (remainder unused) and
// z_i = z_{i-1} - (r_i/m) sum_{j in H_i} g(z_{i-1}, xi_j).
Eigen::VectorXd run_minibatch_sgd(const LossModel& model, const Dataset& data,
                                  const Eigen::VectorXd& theta0, const SgdConfig& config,
                                  std::uint64_t seed, EvalCounter* counter = nullptr);

}  // namespace fone
