#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fone/cluster.hpp"
#include "fone/fone.hpp"
#include "fone/sgd.hpp"

namespace fone {

struct DistributedFoneConfig {
  FoneConfig fone;  // fone.seed is the master seed; round j uses derive_seed(seed, j)
  Index K = 20;     // rounds; K = 0 returns theta0 untouched
};

// Raised when the round-j inner loop diverges; carries both indices.
struct DistributedFoneDivergenceError : std::runtime_error {
  Index round;
  Index iteration;
  DistributedFoneDivergenceError(Index j, Index t, const std::string& what)
      : std::runtime_error(what), round(j), iteration(t) {}
};

// Per-shard instrumentation of the refinement loop. aggregate_evals counts
// per-sample subgradient evaluations during gradient aggregation (touches
// every shard); inner_evals counts them inside the FONE loop, which by
// contract touches only shard 0.
struct DistributedFoneStats {
  std::vector<std::uint64_t> aggregate_evals;
  std::vector<std::uint64_t> inner_evals;
};

// Divide-and-conquer SGD: each machine runs one local pass from the shared
// theta0 (shard k's stream is derive_seed(seed, k)) and the coordinator
// returns the unweighted mean. config.m == 0 resolves per shard to
// default_batch(p, n_k). Ledger: one round, 2L vectors (theta0 broadcast out,
// L local estimates back).
Eigen::VectorXd run_dcsgd(Cluster& cluster, const LossModel& model,
                          const Eigen::VectorXd& theta0, const SgdConfig& config,
                          std::uint64_t seed, int threads = 1);

// (1/N) sum of all subgradients at theta: machines send (sum, count) pairs,
// so the ledger gains L vectors and L scalars.
Eigen::VectorXd aggregate_subgradient(Cluster& cluster, const LossModel& model,
                                      const Eigen::VectorXd& theta, int threads = 1,
                                      std::vector<std::uint64_t>* per_shard_evals = nullptr);

// K rounds of: aggregate the global mean subgradient a_j at the current
// iterate, then run the FONE inner loop on shard 0 with z_0 = theta_{j-1}
// and a = a_j, taking theta_j = z_T. Ledger per round: L vectors in, the a
// broadcast, and the theta_j broadcast (K(L+2) vectors total, KL scalars).
Eigen::VectorXd run_distributed_fone(Cluster& cluster, const LossModel& model,
                                     const Eigen::VectorXd& theta0,
                                     const DistributedFoneConfig& config, int threads = 1,
                                     DistributedFoneStats* stats = nullptr);

}  // namespace fone
