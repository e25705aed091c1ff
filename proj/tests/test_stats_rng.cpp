#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fone/rng.hpp"
#include "fone/stats.hpp"

using namespace fone;

TEST_CASE("norm_ppf reproduces reference quantiles") {
  // Reference values from the published AS241 (PPND16) tables / independent
  // high-precision evaluation.
  CHECK(norm_ppf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(norm_ppf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(norm_ppf(0.25) == doctest::Approx(-0.6744897501960817).epsilon(1e-14));
  CHECK(norm_ppf(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norm_ppf inverts norm_cdf across the support") {
  // norm_cdf goes through std::erfc, an implementation independent of AS241,
  // so the round trip cross-checks both.
  const std::vector<double> ps = {1e-12, 1e-8, 1e-4, 0.01, 0.1,  0.25, 0.5,
                                  0.75,  0.9,  0.99, 1.0 - 1e-4, 1.0 - 1e-8};
  for (double p : ps) {
    const double x = norm_ppf(p);
    CHECK(norm_cdf(x) == doctest::Approx(p).epsilon(1e-12));
    // Antisymmetry of the quantile function. Restricted to p >= 1e-4: for
    // smaller p the argument 1 - p itself quantizes at ulp(1) ~ 2e-16,
    // which moves the upper-tail quantile by ulp(1)/pdf(x) >> 1e-10.
    if (p >= 1e-4) CHECK(norm_ppf(1.0 - p) == doctest::Approx(-x).epsilon(1e-10));
  }
  CHECK_THROWS_AS(norm_ppf(0.0), std::domain_error);
  CHECK_THROWS_AS(norm_ppf(1.0), std::domain_error);
}

TEST_CASE("norm_pdf at zero and symmetry") {
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(norm_pdf(1.3) == doctest::Approx(norm_pdf(-1.3)).epsilon(1e-15));
  // Density at the lower quartile, the quantile-regression Hessian scale.
  CHECK(norm_pdf(norm_ppf(0.25)) == doctest::Approx(0.3177766).epsilon(1e-6));
}

TEST_CASE("log1pexp is overflow-safe and accurate") {
  CHECK(log1pexp(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(log1pexp(3.0) == doctest::Approx(std::log1p(std::exp(3.0))).epsilon(1e-15));
  CHECK(log1pexp(-3.0) == doctest::Approx(std::log1p(std::exp(-3.0))).epsilon(1e-15));
  CHECK(log1pexp(800.0) == doctest::Approx(800.0).epsilon(1e-15));  // naive form overflows
  CHECK(log1pexp(-800.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::isfinite(log1pexp(800.0)));
}

TEST_CASE("mean and standard_error hand values") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  CHECK(mean(v) == doctest::Approx(2.5).epsilon(1e-15));
  // Unbiased sample variance 5/3; SE = sqrt(5/12).
  CHECK(standard_error(v) == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-15));
  CHECK(std::isnan(mean({})));
  CHECK(std::isnan(standard_error({1.0})));
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  // Tags and seeds do not collapse into each other.
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("Rng determinism and ranges") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    all_equal = all_equal && (ua == b.uniform());
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
    const double uo = c.uniform_open();
    CHECK(uo > 0.0);
    CHECK(uo < 1.0);
  }
  CHECK(all_equal);
}

TEST_CASE("Rng::below bounds and rejection") {
  Rng rng(7);
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t v = rng.below(10);
    CHECK(v < 10);
    seen.insert(v);
  }
  CHECK(seen.size() == 10);  // every residue appears
}

TEST_CASE("Rng::normal has standard moments") {
  Rng rng(20240);
  const int n = 100000;
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    ss += z * z;
  }
  const double m = s / n;
  const double var = ss / n - m * m;
  CHECK(std::abs(m) < 4.0 / std::sqrt(static_cast<double>(n)));       // 4-sigma band
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("sample_distinct contract") {
  Rng rng(99);
  std::vector<Index> out;

  rng.sample_distinct(50, 12, out);
  CHECK(out.size() == 12);
  CHECK(std::is_sorted(out.begin(), out.end()));
  CHECK(std::adjacent_find(out.begin(), out.end()) == out.end());  // distinct
  for (Index i : out) {
    CHECK(i >= 0);
    CHECK(i < 50);
  }

  CHECK_THROWS_AS(rng.sample_distinct(5, 6, out), std::invalid_argument);

  // m == n short-circuits to the identity without consuming engine draws.
  Rng x(5), y(5);
  x.sample_distinct(8, 8, out);
  CHECK(out.size() == 8);
  for (Index i = 0; i < 8; ++i) CHECK(out[static_cast<std::size_t>(i)] == i);
  CHECK(x.next_u64() == y.next_u64());
}

TEST_CASE("sample_distinct covers the space") {
  Rng rng(3);
  std::vector<Index> out;
  std::set<Index> seen;
  for (int rep = 0; rep < 400; ++rep) {
    rng.sample_distinct(10, 1, out);
    seen.insert(out[0]);
  }
  CHECK(seen.size() == 10);
}

TEST_CASE("shuffle preserves the multiset") {
  Rng rng(11);
  std::vector<int> v = {1, 2, 2, 3, 4, 5, 6, 7};
  std::vector<int> orig = v;
  rng.shuffle(v);
  std::vector<int> sorted_v = v;
  std::sort(sorted_v.begin(), sorted_v.end());
  CHECK(sorted_v == orig);
}
