#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace fone {

// Standard normal density.
inline double norm_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// Standard normal CDF via erfc; accurate in both tails.
inline double norm_cdf(double x) {
  static const double inv_sqrt2 = 0.7071067811865475244;
  return 0.5 * std::erfc(-x * inv_sqrt2);
}

// Inverse standard normal CDF, Wichura's algorithm AS241 (PPND16),
// |relative error| < 1e-15 over (0,1). Pure double arithmetic, so seeded
// normal draws are identical across platforms for a given toolchain.
double norm_ppf(double p);

// log(1 + exp(v)) without overflow for large |v|.
inline double log1pexp(double v) {
  return (v > 0.0) ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Standard error of the mean (unbiased sample variance / n, square-rooted).
inline double standard_error(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(n - 1) * static_cast<double>(n)));
}

}  // namespace fone
