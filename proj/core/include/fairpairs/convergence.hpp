// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "fairpairs/pair_stats.hpp"
#include "fairpairs/types.hpp"

namespace fairpairs {

// True bottom-click probabilities keyed like PairStats: (bottom, top).
using PairProbabilities = std::map<std::pair<DocumentId, DocumentId>, double>;

// Separation margin used by the sufficiency test below.
struct ConvergenceParams {
  double epsilon = 0.0;
  bool operator==(const ConvergenceParams&) const = default;
};

// epsilon = 1/2 * min over document pairs of |P_ij - P_ji|, the smallest
// gap between the two orientations of any pair. Requires both orientations
// of every pair present (NoDataError otherwise) and at least one nonzero
// gap (ZeroGapError otherwise).
ConvergenceParams epsilon_from_model(const PairProbabilities& true_p);

// Per-orientation outcome of the sufficiency test.
struct PairSufficiency {
  DocumentId bottom;
  DocumentId top;
  std::uint64_t n_ij = 0;         // impressions of this orientation
  std::uint64_t n_ji = 0;         // impressions of the reverse orientation
  double balance_deviation = 0.0;  // |1 - n_ji / n_ij|
  double accuracy_deviation = 0.0;  // |p_ij - P_ij|, or CI half-width
  bool balance_ok = false;
  bool accuracy_ok = false;
  bool ok() const { return balance_ok && accuracy_ok; }
};

struct SufficiencyReport {
  std::vector<PairSufficiency> pairs;
  // Set when no true probabilities were supplied and the confidence-interval
  // half-width stood in for the unknown estimation error.
  bool accuracy_is_proxy = false;
  bool overall = false;
};

// Data-sufficiency test for the pairwise estimates: for every ordered pair
// with data, (a) the two orientations were shown near-equally often,
// |1 - n_ji/n_ij| < epsilon, and (b) the click-rate estimate is close,
// |p_ij - P_ij| < epsilon / 2. Once every pair passes both, the error-rate
// minimizer is guaranteed to reproduce the relevance order (see the
// learner's documentation for the argument).
//
// When `true_p` is supplied, pairs are the union of those with data and
// those in `true_p`, and accuracy compares against the true probability.
// When it is null, the Wilson half-width at `proxy_confidence` is used as a
// conservative stand-in. Throws NoDataError when a required orientation has
// no impressions, and Error unless epsilon > 0.
SufficiencyReport sufficiency_check(const PairStats& stats,
                                    const ConvergenceParams& params,
                                    const PairProbabilities* true_p = nullptr,
                                    double proxy_confidence = 0.95);

}  // namespace fairpairs
