#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "fone/stats.hpp"

namespace fone {

using Eigen::Index;

// SplitMix64 finalizer (Steele/Lea/Flood); used only to derive stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic seed of the substream `tag` of stream `seed`. Replications,
// shards, rounds, and tuning candidates each get their own tag, so results
// do not depend on scheduling or on which estimators run together.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t h = splitmix64(seed ^ 0xA3C59AC2F0B2FA9DULL);
  h = splitmix64(h + tag);
  return splitmix64(h);
}

// Seeded generator with fixed, portable output mappings: mt19937_64 supplies
// bits, uniforms take the top 53 bits, normals go through the inverse CDF
// (AS241). No std::*_distribution is used anywhere, because their output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1): mid-point offset keeps inverse-CDF endpoints finite.
  double uniform_open() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() { return norm_ppf(uniform_open()); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t threshold = (0ULL - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = eng_();
      if (x >= threshold) return x % n;
    }
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // m distinct indices drawn uniformly from {0,...,n-1} (Floyd's algorithm),
  // returned sorted so downstream accumulation order is deterministic.
  // m == n short-circuits to the identity (no engine draws consumed).
  void sample_distinct(Index n, Index m, std::vector<Index>& out) {
    if (m < 0 || n < 0 || m > n)
      throw std::invalid_argument("Rng::sample_distinct: need 0 <= m <= n");
    out.clear();
    out.reserve(static_cast<std::size_t>(m));
    if (m == n) {
      out.resize(static_cast<std::size_t>(n));
      std::iota(out.begin(), out.end(), Index{0});
      return;
    }
    std::unordered_set<Index> seen;
    seen.reserve(static_cast<std::size_t>(2 * m));
    for (Index j = n - m; j < n; ++j) {
      const Index t = static_cast<Index>(below(static_cast<std::uint64_t>(j) + 1));
      if (seen.insert(t).second) {
        out.push_back(t);
      } else {
        seen.insert(j);
        out.push_back(j);
      }
    }
    std::sort(out.begin(), out.end());
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fone
