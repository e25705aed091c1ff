#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fone/dataset.hpp"
#include "fone/model.hpp"

namespace fone {

// Candidate scale constants, strictly increasing and positive. The default
// spans 1e-3..1e3 in powers of ten.
struct CandidateGrid {
  std::vector<double> values;
  static CandidateGrid default_grid();
};

void validate(const CandidateGrid& grid);

struct TuningResult {
  double chosen = 0.0;
  Index chosen_index = -1;
  std::vector<double> scores;  // +inf for candidates with non-finite risk
};

struct TuningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ScoreFn = std::function<double(double candidate, std::uint64_t seed)>;

// Evaluates score(value_i, derive_seed(seed, i)) for every candidate,
// mapping non-finite scores to +inf. Returns the argmin; exact ties go to
// the smallest candidate. Throws TuningError (with all scores in the
// message) when every candidate is non-finite.
TuningResult select_scale_constant(const ScoreFn& score, const CandidateGrid& grid,
                                   std::uint64_t seed);

// c0 selection for SGD: run a local pass on machine 1 per candidate and
// score the machine-1 empirical risk at the resulting estimate.
TuningResult tune_sgd_c0(const LossModel& model, const Dataset& shard1,
                         const Eigen::VectorXd& theta0, Index m, double alpha,
                         const CandidateGrid& grid, std::uint64_t seed);

// c0' selection for the distributed refinement: with eta = c m / n_1, run
// one round (aggregate at theta0, then the inner loop on machine 1) and
// score the machine-1 empirical risk at theta_1. Divergent candidates score
// +inf.
TuningResult tune_fone_scale(const LossModel& model, const std::vector<Dataset>& shards,
                             const Eigen::VectorXd& theta0, Index m, Index T,
                             const CandidateGrid& grid, std::uint64_t seed);

}  // namespace fone
