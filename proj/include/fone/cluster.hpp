#pragma once

#include <cstdint>
#include <vector>

#include "fone/dataset.hpp"

namespace fone {

// Communication accounting: every transmitted p-vector and scalar is counted,
// including broadcasts, so the O(p)-per-round behavior is checkable.
struct CommLedger {
  std::uint64_t rounds = 0;
  std::uint64_t vectors_sent = 0;
  std::uint64_t scalars_sent = 0;

  void add_round() { ++rounds; }
  void add_vectors(std::uint64_t k) { vectors_sent += k; }
  void add_scalars(std::uint64_t k) { scalars_sent += k; }
};

// Dataset partitioned across simulated machines; shard 0 is the largest
// (ties keep the caller's order), mirroring the convention that the
// refinement loop runs on the first machine.
struct Cluster {
  std::vector<Dataset> shards;
  CommLedger ledger;

  Index num_shards() const { return static_cast<Index>(shards.size()); }
  Index total_n() const {
    Index t = 0;
    for (const auto& s : shards) t += s.n();
    return t;
  }
};

// Seeded permutation of sample indices, contiguous assignment by `sizes`,
// then a stable largest-first reorder of the shards. Ledger starts at zero.
Cluster shard_dataset(const Dataset& data, const std::vector<Index>& sizes, std::uint64_t seed);

// n_k = floor(N/L) + 1 for the first N mod L shards (already descending).
std::vector<Index> even_split(Index total, Index machines);

// First shard gets n1, the rest split the remainder evenly.
std::vector<Index> split_with_first(Index total, Index machines, Index n1);

}  // namespace fone
