#pragma once

// Experiment orchestration: replication loops with derived seed streams,
// constant tuning, estimator execution, metric computation, and aggregation.

#include <cstdint>

#include "fone/experiment.hpp"
#include "fone/report.hpp"

namespace fone {

struct RunnerOptions {
  int threads = 1;  // replication-level worker pool size
};

// Runs every requested estimator for r = 1..reps, each replication on its
// own seed stream derive_seed(spec.seed, r) (stream 0 is reserved for
// shared tuning), and returns per-replication rows plus TUNE_* audit rows.
// Deterministic function of the spec up to the wall-clock column, and of
// that too when record_timing = false.
ExperimentReport run_experiment(const ExperimentSpec& spec, const RunnerOptions& options = {});

// Initialization-sensitivity demonstration: one-pass mini-batch SGD on a
// logistic problem started from (a) a consistent pilot estimate fit on
// 10p fresh samples and (b) a point drawn uniformly on the sphere of radius
// sqrt(p) — same data, same batch sequence, same tuned step constant.
struct RandomInitDemo {
  double consistent_mean_error = 0.0;  // mean ||est - theta*|| over reps, arm (a)
  double random_mean_error = 0.0;      // arm (b)
  double ratio = 0.0;                  // random / consistent
  ExperimentReport report;             // rows: SGD (consistent) and SGD_RAND
};

RandomInitDemo run_random_init_demo(Index p, Index n, Index reps, std::uint64_t seed,
                                    int threads = 1);

}  // namespace fone
