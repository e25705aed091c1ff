#include "fone/distributed.hpp"

#include "fone/parallel.hpp"
#include "fone/rng.hpp"

namespace fone {

Eigen::VectorXd run_dcsgd(Cluster& cluster, const LossModel& model,
                          const Eigen::VectorXd& theta0, const SgdConfig& config,
                          std::uint64_t seed, int threads) {
  const Index machines = cluster.num_shards();
  if (machines < 1) throw std::invalid_argument("run_dcsgd: empty cluster");
  const Index p = cluster.shards[0].dim();

  std::vector<SgdConfig> local(static_cast<std::size_t>(machines), config);
  for (Index k = 0; k < machines; ++k) {
    const Index nk = cluster.shards[static_cast<std::size_t>(k)].n();
    if (config.m == 0) local[static_cast<std::size_t>(k)].m = default_batch(p, nk);
    if (nk < local[static_cast<std::size_t>(k)].m)
      throw std::invalid_argument("run_dcsgd: shard " + std::to_string(k) +
                                  " is smaller than the batch size");
  }

  std::vector<Eigen::VectorXd> locals(static_cast<std::size_t>(machines));
  parallel_for(machines, threads, [&](Index k) {
    locals[static_cast<std::size_t>(k)] =
        run_minibatch_sgd(model, cluster.shards[static_cast<std::size_t>(k)], theta0,
                          local[static_cast<std::size_t>(k)],
                          derive_seed(seed, static_cast<std::uint64_t>(k)));
  });

  // Deterministic reduction in shard order, independent of scheduling.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (Index k = 0; k < machines; ++k) mean += locals[static_cast<std::size_t>(k)];
  mean /= static_cast<double>(machines);

  cluster.ledger.add_round();
  cluster.ledger.add_vectors(2 * static_cast<std::uint64_t>(machines));
  return mean;
}

Eigen::VectorXd aggregate_subgradient(Cluster& cluster, const LossModel& model,
                                      const Eigen::VectorXd& theta, int threads,
                                      std::vector<std::uint64_t>* per_shard_evals) {
  const Index machines = cluster.num_shards();
  if (machines < 1) throw std::invalid_argument("aggregate_subgradient: empty cluster");
  const Index p = cluster.shards[0].dim();

  std::vector<Eigen::VectorXd> sums(static_cast<std::size_t>(machines));
  std::vector<EvalCounter> counters(static_cast<std::size_t>(machines));
  parallel_for(machines, threads, [&](Index k) {
    sums[static_cast<std::size_t>(k)] =
        sum_subgradient(model, cluster.shards[static_cast<std::size_t>(k)], theta,
                        &counters[static_cast<std::size_t>(k)]);
  });

  Eigen::VectorXd total = Eigen::VectorXd::Zero(p);
  for (Index k = 0; k < machines; ++k) total += sums[static_cast<std::size_t>(k)];
  total /= static_cast<double>(cluster.total_n());

  if (per_shard_evals) {
    per_shard_evals->resize(static_cast<std::size_t>(machines));
    for (Index k = 0; k < machines; ++k)
      (*per_shard_evals)[static_cast<std::size_t>(k)] +=
          counters[static_cast<std::size_t>(k)].subgradient_evals;
  }

  cluster.ledger.add_vectors(static_cast<std::uint64_t>(machines));
  cluster.ledger.add_scalars(static_cast<std::uint64_t>(machines));
  return total;
}

Eigen::VectorXd run_distributed_fone(Cluster& cluster, const LossModel& model,
                                     const Eigen::VectorXd& theta0,
                                     const DistributedFoneConfig& config, int threads,
                                     DistributedFoneStats* stats) {
  const Index machines = cluster.num_shards();
  if (machines < 1) throw std::invalid_argument("run_distributed_fone: empty cluster");
  if (config.K < 0) throw std::invalid_argument("run_distributed_fone: K must be >= 0");
  if (config.K > 0 && cluster.shards[0].n() < config.fone.m)
    throw std::invalid_argument("run_distributed_fone: first shard smaller than the batch size");

  if (stats) {
    stats->aggregate_evals.assign(static_cast<std::size_t>(machines), 0);
    stats->inner_evals.assign(static_cast<std::size_t>(machines), 0);
  }

  Eigen::VectorXd theta = theta0;
  for (Index j = 1; j <= config.K; ++j) {
    const Eigen::VectorXd a = aggregate_subgradient(
        cluster, model, theta, threads, stats ? &stats->aggregate_evals : nullptr);

    FoneConfig round = config.fone;
    round.seed = derive_seed(config.fone.seed, static_cast<std::uint64_t>(j));
    EvalCounter inner;
    try {
      const FoneOutput out = run_fone(model, cluster.shards[0], theta, a, round, &inner);
      theta = out.z_T;
    } catch (const FoneDivergenceError& e) {
      throw DistributedFoneDivergenceError(
          j, e.iteration,
          "run_distributed_fone: inner loop diverged in round " + std::to_string(j) + ": " +
              e.what());
    }
    if (stats) stats->inner_evals[0] += inner.subgradient_evals;

    cluster.ledger.add_round();
    cluster.ledger.add_vectors(2);  // a to machine 1, theta_j broadcast back out
  }
  return theta;
}

}  // namespace fone
