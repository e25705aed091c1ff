#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "fone/cluster.hpp"
#include "fone/datagen.hpp"
#include "fone/stats.hpp"

using namespace fone;

TEST_CASE("generate_problem basic structure") {
  DesignSpec design;
  design.p = 4;

  SUBCASE("logistic responses are signs and theta_star = theta_raw") {
    GeneratedProblem prob = generate_problem(LossKind::Logistic, design, 300, std::nullopt, 8);
    CHECK(prob.theta_star.isApprox(prob.theta_raw, 0.0));
    for (Index j = 0; j < 4; ++j) {
      CHECK(prob.theta_raw(j) >= -0.5);
      CHECK(prob.theta_raw(j) <= 0.5);
    }
    for (Index i = 0; i < prob.data.n(); ++i) {
      CHECK((prob.data.y(i) == 1.0 || prob.data.y(i) == -1.0));
      CHECK(prob.data.x(i, 0) == 1.0);
    }
  }

  SUBCASE("quantile intercept shift") {
    GeneratedProblem prob = generate_problem(LossKind::Quantile, design, 100, 0.25, 8);
    CHECK(prob.theta_star(0) ==
          doctest::Approx(prob.theta_raw(0) - 0.6744897501960817).epsilon(1e-12));
    CHECK(prob.theta_star.tail(3).isApprox(prob.theta_raw.tail(3), 0.0));

    GeneratedProblem median = generate_problem(LossKind::Quantile, design, 100, 0.5, 8);
    CHECK(median.theta_star.isApprox(median.theta_raw, 0.0));  // ppf(0.5) = 0
  }

  SUBCASE("tau presence is enforced") {
    CHECK_THROWS(generate_problem(LossKind::Quantile, design, 50, std::nullopt, 1));
    CHECK_THROWS(generate_problem(LossKind::Logistic, design, 50, 0.25, 1));
  }

  SUBCASE("fixed theta_raw is honored") {
    const Eigen::VectorXd fixed = Eigen::VectorXd::Constant(4, 0.25);
    GeneratedProblem prob =
        generate_problem(LossKind::Quadratic, design, 60, std::nullopt, 9, &fixed);
    CHECK(prob.theta_raw.isApprox(fixed, 0.0));
  }
}

TEST_CASE("generation is reproducible and seed-sensitive") {
  DesignSpec design;
  design.p = 3;
  GeneratedProblem a = generate_problem(LossKind::Logistic, design, 200, std::nullopt, 77);
  GeneratedProblem b = generate_problem(LossKind::Logistic, design, 200, std::nullopt, 77);
  GeneratedProblem c = generate_problem(LossKind::Logistic, design, 200, std::nullopt, 78);
  CHECK(a.data.x.isApprox(b.data.x, 0.0));
  CHECK(a.data.y.isApprox(b.data.y, 0.0));
  CHECK(a.theta_star.isApprox(b.theta_star, 0.0));
  CHECK(!a.data.x.isApprox(c.data.x, 0.0));
}

TEST_CASE("toeplitz with zero dependence equals the identity design") {
  DesignSpec ident;
  ident.p = 5;
  DesignSpec toep;
  toep.p = 5;
  toep.covariance = CovKind::Toeplitz;
  toep.varsigma = 0.0;
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(5, 0.1);
  Dataset a = generate_samples(LossModel::quadratic(), ident, theta, 50, 123);
  Dataset b = generate_samples(LossModel::quadratic(), toep, theta, 50, 123);
  CHECK(a.x.isApprox(b.x, 0.0));
  CHECK(a.y.isApprox(b.y, 0.0));
}

TEST_CASE("empirical covariate covariance matches the design") {
  DesignSpec design;
  design.p = 6;
  design.covariance = CovKind::Toeplitz;
  design.varsigma = 0.5;
  const Index n = 100000;
  Dataset data = generate_samples(LossModel::quadratic(), design,
                                  Eigen::VectorXd::Zero(6), n, 2024);
  const Eigen::MatrixXd z = data.x.rightCols(5);
  const Eigen::MatrixXd emp = (z.transpose() * z) / static_cast<double>(n);
  const Eigen::MatrixXd target = covariance_matrix(design);
  CHECK((emp - target).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("quantile responses put mass tau below the true regression line") {
  DesignSpec design;
  design.p = 5;
  const double tau = 0.25;
  const Index n = 20000;
  GeneratedProblem prob = generate_problem(LossKind::Quantile, design, n, tau, 31);
  Index below = 0;
  for (Index i = 0; i < n; ++i)
    if (prob.data.y(i) - prob.data.x.row(i).dot(prob.theta_star) <= 0.0) ++below;
  const double frac = static_cast<double>(below) / static_cast<double>(n);
  CHECK(std::abs(frac - tau) <= 3.0 * std::sqrt(tau * (1 - tau) / static_cast<double>(n)));
}

TEST_CASE("even_split and split_with_first") {
  const std::vector<Index> even = even_split(100, 4);
  CHECK(even == std::vector<Index>{25, 25, 25, 25});

  const std::vector<Index> ragged = even_split(103, 4);
  CHECK(ragged == std::vector<Index>{26, 26, 26, 25});
  CHECK(std::accumulate(ragged.begin(), ragged.end(), Index{0}) == 103);

  const std::vector<Index> first = split_with_first(100, 4, 40);
  CHECK(first == std::vector<Index>{40, 20, 20, 20});
}

TEST_CASE("shard_dataset partitions and orders largest-first") {
  DesignSpec design;
  design.p = 3;
  Dataset data = generate_samples(LossModel::quadratic(), design,
                                  Eigen::VectorXd::Zero(3), 100, 55);

  SUBCASE("single shard is a permutation of the dataset") {
    Cluster c = shard_dataset(data, {100}, 7);
    REQUIRE(c.num_shards() == 1);
    CHECK(c.total_n() == 100);
    Eigen::VectorXd ys = c.shards[0].y, yd = data.y;
    std::sort(ys.begin(), ys.end());
    std::sort(yd.begin(), yd.end());
    CHECK(ys.isApprox(yd, 0.0));
    CHECK(c.ledger.rounds == 0);
    CHECK(c.ledger.vectors_sent == 0);
    CHECK(c.ledger.scalars_sent == 0);
  }

  SUBCASE("uneven sizes are reordered largest-first") {
    Cluster c = shard_dataset(data, {25, 50, 25}, 7);
    REQUIRE(c.num_shards() == 3);
    CHECK(c.shards[0].n() == 50);
    CHECK(c.shards[1].n() == 25);
    CHECK(c.shards[2].n() == 25);
    CHECK(c.total_n() == 100);

    // Every sample lands in exactly one shard: compare response multisets.
    std::vector<double> all;
    for (const Dataset& s : c.shards)
      for (Index i = 0; i < s.n(); ++i) all.push_back(s.y(i));
    std::vector<double> orig(data.y.begin(), data.y.end());
    std::sort(all.begin(), all.end());
    std::sort(orig.begin(), orig.end());
    CHECK(all == orig);
  }

  SUBCASE("sizes must sum to n") {
    CHECK_THROWS(shard_dataset(data, {60, 60}, 7));
  }

  SUBCASE("sharding is deterministic in the seed") {
    Cluster a = shard_dataset(data, {50, 50}, 7);
    Cluster b = shard_dataset(data, {50, 50}, 7);
    Cluster c = shard_dataset(data, {50, 50}, 8);
    CHECK(a.shards[0].x.isApprox(b.shards[0].x, 0.0));
    CHECK(a.shards[1].y.isApprox(b.shards[1].y, 0.0));
    CHECK(!a.shards[0].x.isApprox(c.shards[0].x, 0.0));
  }
}
