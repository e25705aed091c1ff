#include "fone/tuning.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fone/fone.hpp"
#include "fone/rng.hpp"
#include "fone/sgd.hpp"

namespace fone {

CandidateGrid CandidateGrid::default_grid() {
  return CandidateGrid{{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}};
}

void validate(const CandidateGrid& grid) {
  if (grid.values.empty()) throw std::invalid_argument("tuning: empty candidate grid");
  double prev = 0.0;
  for (const double v : grid.values) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("tuning: candidates must be positive and finite");
    if (v <= prev) throw std::invalid_argument("tuning: candidates must be strictly increasing");
    prev = v;
  }
}

TuningResult select_scale_constant(const ScoreFn& score, const CandidateGrid& grid,
                                   std::uint64_t seed) {
  validate(grid);
  const double inf = std::numeric_limits<double>::infinity();
  TuningResult result;
  result.scores.reserve(grid.values.size());
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    double s = score(grid.values[i], derive_seed(seed, static_cast<std::uint64_t>(i)));
    if (!std::isfinite(s)) s = inf;
    result.scores.push_back(s);
    // Strict comparison: the first (smallest) candidate wins exact ties.
    if (result.chosen_index < 0 || s < result.scores[static_cast<std::size_t>(result.chosen_index)]) {
      result.chosen_index = static_cast<Index>(i);
      result.chosen = grid.values[i];
    }
  }
  if (result.scores[static_cast<std::size_t>(result.chosen_index)] == inf) {
    std::ostringstream msg;
    msg << "tuning: every candidate produced non-finite risk;";
    for (std::size_t i = 0; i < grid.values.size(); ++i)
      msg << " c=" << grid.values[i] << " -> " << result.scores[i];
    throw TuningError(msg.str());
  }
  return result;
}

TuningResult tune_sgd_c0(const LossModel& model, const Dataset& shard1,
                         const Eigen::VectorXd& theta0, Index m, double alpha,
                         const CandidateGrid& grid, std::uint64_t seed) {
  const ScoreFn score = [&](double c0, std::uint64_t run_seed) -> double {
    SgdConfig config{m, SgdSchedule{c0, alpha}};
    const Eigen::VectorXd est = run_minibatch_sgd(model, shard1, theta0, config, run_seed);
    if (!est.allFinite()) return std::numeric_limits<double>::quiet_NaN();
    return average_loss(model, shard1, est);
  };
  return select_scale_constant(score, grid, seed);
}

TuningResult tune_fone_scale(const LossModel& model, const std::vector<Dataset>& shards,
                             const Eigen::VectorXd& theta0, Index m, Index T,
                             const CandidateGrid& grid, std::uint64_t seed) {
  if (shards.empty()) throw std::invalid_argument("tune_fone_scale: no shards");
  const Index n1 = shards[0].n();

  // The round-1 aggregate at theta0 does not depend on the candidate.
  Eigen::VectorXd a = Eigen::VectorXd::Zero(theta0.size());
  Index total = 0;
  for (const Dataset& shard : shards) {
    a += sum_subgradient(model, shard, theta0);
    total += shard.n();
  }
  a /= static_cast<double>(total);

  const ScoreFn score = [&](double c, std::uint64_t run_seed) -> double {
    FoneConfig config;
    config.eta = c * static_cast<double>(m) / static_cast<double>(n1);
    config.m = m;
    config.T = T;
    // Mirrors run_distributed_fone's round-1 stream derivation.
    config.seed = derive_seed(run_seed, 1);
    try {
      const FoneOutput out = run_fone(model, shards[0], theta0, a, config);
      return average_loss(model, shards[0], out.z_T);
    } catch (const FoneDivergenceError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  return select_scale_constant(score, grid, seed);
}

}  // namespace fone
