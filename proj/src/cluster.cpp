#include "fone/cluster.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fone/rng.hpp"

namespace fone {

Cluster shard_dataset(const Dataset& data, const std::vector<Index>& sizes, std::uint64_t seed) {
  const Index n = data.n();
  if (sizes.empty()) throw std::invalid_argument("shard_dataset: no shard sizes");
  Index total = 0;
  for (const Index s : sizes) {
    if (s < 1) throw std::invalid_argument("shard_dataset: every shard size must be >= 1");
    total += s;
  }
  if (total != n) throw std::invalid_argument("shard_dataset: sizes must sum to the sample count");

  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng(seed);
  rng.shuffle(perm);

  Cluster cluster;
  cluster.shards.reserve(sizes.size());
  Index offset = 0;
  for (const Index sz : sizes) {
    Dataset shard;
    shard.x.resize(sz, data.dim());
    shard.y.resize(sz);
    for (Index i = 0; i < sz; ++i) {
      const Index src = perm[static_cast<std::size_t>(offset + i)];
      shard.x.row(i) = data.x.row(src);
      shard.y(i) = data.y(src);
    }
    offset += sz;
    cluster.shards.push_back(std::move(shard));
  }

  std::stable_sort(cluster.shards.begin(), cluster.shards.end(),
                   [](const Dataset& a, const Dataset& b) { return a.n() > b.n(); });
  return cluster;
}

std::vector<Index> even_split(Index total, Index machines) {
  if (machines < 1) throw std::invalid_argument("even_split: machines must be >= 1");
  if (total < machines)
    throw std::invalid_argument("even_split: fewer samples than machines");
  std::vector<Index> sizes(static_cast<std::size_t>(machines), total / machines);
  for (Index k = 0; k < total % machines; ++k) ++sizes[static_cast<std::size_t>(k)];
  return sizes;
}

std::vector<Index> split_with_first(Index total, Index machines, Index n1) {
  if (machines < 1) throw std::invalid_argument("split_with_first: machines must be >= 1");
  if (n1 < 1 || n1 > total - (machines - 1))
    throw std::invalid_argument("split_with_first: n1 leaves no room for the other machines");
  if (machines == 1) {
    if (n1 != total) throw std::invalid_argument("split_with_first: single machine must take all");
    return {total};
  }
  std::vector<Index> sizes{n1};
  const std::vector<Index> rest = even_split(total - n1, machines - 1);
  sizes.insert(sizes.end(), rest.begin(), rest.end());
  return sizes;
}

}  // namespace fone
