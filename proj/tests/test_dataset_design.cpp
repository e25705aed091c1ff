#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "fone/dataset.hpp"
#include "fone/design.hpp"

using namespace fone;

namespace {

Dataset tiny_dataset() {
  RowMatrixXd x(3, 2);
  x << 1.0, 0.25, 1.0, -1.5, 1.0, 3.0;
  Eigen::VectorXd y(3);
  y << 0.5, -2.0, 1.0 / 3.0;
  return make_dataset(x, y);
}

std::string temp_path(const char* stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("make_dataset accepts a valid dataset") {
  const Dataset d = tiny_dataset();
  CHECK(d.n() == 3);
  CHECK(d.dim() == 2);
  const Sample s = d.sample(1);
  CHECK(s.y == -2.0);
  CHECK(s.x(0) == 1.0);
  CHECK(s.x(1) == -1.5);
}

TEST_CASE("validate_dataset rejects malformed data") {
  Dataset d = tiny_dataset();

  SUBCASE("intercept column must be exactly one") {
    d.x(2, 0) = 1.0 + 1e-12;
    CHECK_THROWS_AS(validate_dataset(d), std::invalid_argument);
  }
  SUBCASE("non-finite covariate") {
    d.x(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate_dataset(d), std::invalid_argument);
  }
  SUBCASE("non-finite response") {
    d.y(1) = std::nan("");
    CHECK_THROWS_AS(validate_dataset(d), std::invalid_argument);
  }
  SUBCASE("shape mismatch") {
    d.y.conservativeResize(2);
    CHECK_THROWS_AS(validate_dataset(d), std::invalid_argument);
  }
}

TEST_CASE("CSV round trip is bit-exact") {
  const Dataset d = tiny_dataset();
  const std::string path = temp_path("fone_test_roundtrip.csv");
  dump_csv(d, path);
  const Dataset back = load_csv(path);
  REQUIRE(back.n() == d.n());
  REQUIRE(back.dim() == d.dim());
  // Shortest round-trip decimals reproduce the doubles exactly, including
  // the non-terminating 1/3.
  for (Index i = 0; i < d.n(); ++i) {
    CHECK(back.y(i) == d.y(i));
    for (Index j = 0; j < d.dim(); ++j) CHECK(back.x(i, j) == d.x(i, j));
  }
  std::remove(path.c_str());
}

TEST_CASE("load_csv rejects a missing file") {
  CHECK_THROWS(load_csv(temp_path("fone_test_does_not_exist.csv")));
}

TEST_CASE("design validation") {
  DesignSpec d;
  d.p = 1;
  CHECK_THROWS_AS(validate(d), std::invalid_argument);
  d.p = 4;
  d.covariance = CovKind::Toeplitz;
  d.varsigma = 1.0;
  CHECK_THROWS_AS(validate(d), std::invalid_argument);
  d.varsigma = -0.1;
  CHECK_THROWS_AS(validate(d), std::invalid_argument);
  d.varsigma = 0.5;
  CHECK_NOTHROW(validate(d));
}

TEST_CASE("covariance families") {
  DesignSpec d;
  d.p = 4;  // 3 non-intercept covariates

  SUBCASE("identity") {
    d.covariance = CovKind::Identity;
    CHECK(covariance_matrix(d).isApprox(Eigen::MatrixXd::Identity(3, 3)));
  }
  SUBCASE("toeplitz") {
    d.covariance = CovKind::Toeplitz;
    d.varsigma = 0.5;
    const Eigen::MatrixXd s = covariance_matrix(d);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        CHECK(s(i, j) == doctest::Approx(std::pow(0.5, std::abs(i - j))).epsilon(1e-15));
  }
  SUBCASE("equicorrelation") {
    d.covariance = CovKind::EquiCorr;
    d.varsigma = 0.3;
    const Eigen::MatrixXd s = covariance_matrix(d);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        CHECK(s(i, j) == doctest::Approx(i == j ? 1.0 : 0.3).epsilon(1e-15));
  }
}

TEST_CASE("second moment matrix adds the intercept block") {
  DesignSpec d;
  d.p = 5;
  d.covariance = CovKind::Toeplitz;
  d.varsigma = 0.4;
  const Eigen::MatrixXd m = second_moment_matrix(d);
  REQUIRE(m.rows() == 5);
  CHECK(m(0, 0) == 1.0);
  CHECK(m.row(0).tail(4).isZero(0.0));
  CHECK(m.col(0).tail(4).isZero(0.0));
  CHECK(m.bottomRightCorner(4, 4).isApprox(covariance_matrix(d), 1e-15));
}

TEST_CASE("cholesky factor reproduces the covariance") {
  DesignSpec d;
  d.p = 6;
  d.covariance = CovKind::EquiCorr;
  d.varsigma = 0.6;
  const Eigen::MatrixXd l = cholesky_factor(d);
  CHECK((l * l.transpose()).isApprox(covariance_matrix(d), 1e-12));
  CHECK(l.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0));

  d.covariance = CovKind::Identity;
  CHECK(cholesky_factor(d).isApprox(Eigen::MatrixXd::Identity(5, 5)));
}
