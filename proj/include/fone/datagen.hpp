#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "fone/dataset.hpp"
#include "fone/design.hpp"
#include "fone/model.hpp"

namespace fone {

// A synthetic estimation problem: the truth, the raw coefficient it was
// built from, and n generated samples. For quantile models,
// theta_star = theta_raw + (ppf(tau), 0, ..., 0) so that the residual
// y - x'theta_star has its tau-quantile at zero; otherwise the two agree.
struct GeneratedProblem {
  LossModel model;
  DesignSpec design;
  Eigen::VectorXd theta_star;
  Eigen::VectorXd theta_raw;
  Dataset data;
  std::uint64_t seed = 0;
};

// Samples with a caller-supplied coefficient. Substreams: covariate normals
// are consumed in sample-major order from derive_seed(seed, 2), response
// draws in sample order from derive_seed(seed, 3) — so the chunked generator
// is free to reorganize computation without changing output.
Dataset generate_samples(const LossModel& model, const DesignSpec& design,
                         const Eigen::VectorXd& theta_raw, Index n, std::uint64_t seed);

// Draws theta_raw ~ Unif([-0.5, 0.5]^p) from derive_seed(seed, 1) — or takes
// *fixed_theta_raw when studies hold the coefficient fixed across
// replications — then generates the dataset. tau is required for quantile
// and must be absent otherwise. Deterministic given arguments.
GeneratedProblem generate_problem(LossKind kind, const DesignSpec& design, Index n,
                                  std::optional<double> tau, std::uint64_t seed,
                                  const Eigen::VectorXd* fixed_theta_raw = nullptr);

}  // namespace fone
