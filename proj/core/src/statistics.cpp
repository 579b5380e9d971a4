// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace fairpairs {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error("normal_quantile: p must lie strictly between 0 and 1");
  }
  // Acklam's rational approximation, relative error below 1.15e-9.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF brings the result to full double
  // precision.
  const double err = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = err * std::sqrt(2.0 * std::numbers::pi) *
                   std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw BadConfidenceError("confidence must lie strictly between 0 and 1");
  }
  if (trials == 0) throw Error("wilson_interval: trials must be >= 1");
  if (successes > trials) {
    throw Error("wilson_interval: successes exceed trials");
  }
  const double z = normal_quantile(0.5 * (1.0 + confidence));
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
  // At the boundaries the limit is analytically exact; pin it so callers can
  // rely on e.g. a never-clicked pair reporting a lower bound of exactly 0.
  if (successes == 0) out.lo = 0.0;
  if (successes == trials) out.hi = 1.0;
  return out;
}

namespace {

using U128 = unsigned __int128;

// Pascal's triangle up to row `kMaxExactN`. C(128, 64) ~ 2.4e37 fits a U128
// with room to spare, and the product of two such binomials in the Fisher
// weights stays below 2^127.
constexpr int kMaxExactN = 128;

const std::vector<std::vector<U128>>& binomial_table() {
  static const std::vector<std::vector<U128>> table = [] {
    std::vector<std::vector<U128>> t(kMaxExactN + 1);
    for (int n = 0; n <= kMaxExactN; ++n) {
      t[n].resize(n + 1);
      t[n][0] = t[n][n] = 1;
      for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

FisherResult fisher_exact(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t d) {
  const std::uint64_t row1 = a + b;
  const std::uint64_t row2 = c + d;
  const std::uint64_t col1 = a + c;
  const std::uint64_t col2 = b + d;
  if (row1 == 0 || row2 == 0 || col1 == 0 || col2 == 0) {
    return {1.0, true};
  }
  const std::uint64_t total = row1 + row2;
  // Feasible values for the top-left cell given the margins.
  const std::uint64_t klo = col1 > row2 ? col1 - row2 : 0;
  const std::uint64_t khi = std::min(row1, col1);

  if (total <= kMaxExactN) {
    // Exact path: the weight of a table is C(row1, k) * C(row2, col1 - k),
    // proportional to its hypergeometric probability. Comparing weights as
    // integers sidesteps any notion of floating-point likelihood ties.
    const auto& C = binomial_table();
    const U128 observed = C[row1][a] * C[row2][c];
    U128 numerator = 0;
    U128 denominator = 0;
    for (std::uint64_t k = klo; k <= khi; ++k) {
      const U128 weight = C[row1][k] * C[row2][col1 - k];
      denominator += weight;
      if (weight <= observed) numerator += weight;
    }
    return {static_cast<double>(static_cast<long double>(numerator) /
                                static_cast<long double>(denominator)),
            false};
  }

  // Log-space fallback. Probabilities within a relative 1e-7 of the observed
  // one count as ties, absorbing lgamma rounding.
  const double log_denom = log_binomial(total, col1);
  const double p_observed =
      std::exp(log_binomial(row1, a) + log_binomial(row2, c) - log_denom);
  const double tie_cutoff = p_observed * (1.0 + 1e-7);
  double p_value = 0.0;
  for (std::uint64_t k = klo; k <= khi; ++k) {
    const double p_k = std::exp(log_binomial(row1, k) +
                                log_binomial(row2, col1 - k) - log_denom);
    if (p_k <= tie_cutoff) p_value += p_k;
  }
  return {std::min(p_value, 1.0), false};
}

}  // namespace fairpairs
