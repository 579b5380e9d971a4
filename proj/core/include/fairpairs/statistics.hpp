// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>

#include "fairpairs/errors.hpp"

namespace fairpairs {

// Inverse of the standard normal CDF for p in (0, 1). Accurate to full
// double precision (rational approximation plus one Halley refinement
// against erfc).
double normal_quantile(double p);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Interval&) const = default;
};

// Wilson score interval for a binomial proportion. Preferred over the Wald
// interval because it behaves sanely at small n and at proportions near 0 or
// 1, both of which routinely occur for rarely-clicked pairs. The interval
// always lies within [0, 1] and brackets successes/trials. Throws
// BadConfidenceError unless 0 < confidence < 1, Error when trials == 0 or
// successes > trials.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence);

struct FisherResult {
  double p_value = 1.0;
  // True when a margin of the table is zero: only one table is possible
  // given the margins, so the test carries no information and p is 1.
  bool degenerate = false;
};

// Two-sided Fisher exact test for the 2x2 table [[a, b], [c, d]], using the
// usual convention that the two-sided p-value sums the probabilities of all
// tables (with the same margins) no more likely than the observed one.
// Tables with at most 128 total observations are evaluated in exact integer
// arithmetic; larger tables fall back to log-space with a tiny relative
// tolerance for likelihood ties.
FisherResult fisher_exact(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t d);

}  // namespace fairpairs
