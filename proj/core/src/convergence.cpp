// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fairpairs/statistics.hpp"

namespace fairpairs {

ConvergenceParams epsilon_from_model(const PairProbabilities& true_p) {
  if (true_p.empty()) {
    throw NoDataError("epsilon_from_model: no pair probabilities given");
  }
  double min_gap = 2.0;
  std::set<std::pair<DocumentId, DocumentId>> visited;
  for (const auto& [key, p_ij] : true_p) {
    if (!visited.insert({std::min(key.first, key.second),
                         std::max(key.first, key.second)})
             .second) {
      continue;
    }
    const auto reverse = true_p.find({key.second, key.first});
    if (reverse == true_p.end()) {
      throw NoDataError("epsilon_from_model: missing reverse orientation for ('" +
                        key.first.value + "', '" + key.second.value + "')");
    }
    min_gap = std::min(min_gap, std::abs(p_ij - reverse->second));
  }
  if (min_gap <= 0.0) {
    throw ZeroGapError(
        "epsilon_from_model: some pair has identical click probabilities in "
        "both orientations");
  }
  return {0.5 * min_gap};
}

SufficiencyReport sufficiency_check(const PairStats& stats,
                                    const ConvergenceParams& params,
                                    const PairProbabilities* true_p,
                                    double proxy_confidence) {
  if (!(params.epsilon > 0.0)) {
    throw Error("sufficiency_check: epsilon must be positive");
  }
  // Work out which ordered pairs must pass: everything observed, plus
  // everything the caller has a true probability for.
  std::set<std::pair<DocumentId, DocumentId>> required;
  for (const auto& [key, counts] : stats.entries()) {
    if (counts.impressions > 0) {
      required.insert(key);
      required.insert({key.second, key.first});
    }
  }
  if (true_p != nullptr) {
    for (const auto& [key, p] : *true_p) required.insert(key);
  }
  if (required.empty()) {
    throw NoDataError("sufficiency_check: no pairs to check");
  }

  SufficiencyReport report;
  report.accuracy_is_proxy = true_p == nullptr;
  report.overall = true;
  for (const auto& key : required) {
    PairSufficiency entry;
    entry.bottom = key.first;
    entry.top = key.second;
    entry.n_ij = stats.impressions(key.first, key.second);
    entry.n_ji = stats.impressions(key.second, key.first);
    if (entry.n_ij == 0) {
      throw NoDataError("sufficiency_check: no impressions of '" +
                        key.first.value + "' below '" + key.second.value +
                        "'");
    }
    entry.balance_deviation =
        std::abs(1.0 - static_cast<double>(entry.n_ji) /
                           static_cast<double>(entry.n_ij));
    entry.balance_ok = entry.balance_deviation < params.epsilon;

    const double p_hat = estimate_p(stats, key.first, key.second);
    if (true_p != nullptr) {
      const auto it = true_p->find(key);
      if (it == true_p->end()) {
        throw NoDataError("sufficiency_check: no true probability for ('" +
                          key.first.value + "', '" + key.second.value + "')");
      }
      entry.accuracy_deviation = std::abs(p_hat - it->second);
    } else {
      const auto ci = wilson_interval(stats.clicks(key.first, key.second),
                                      entry.n_ij, proxy_confidence);
      entry.accuracy_deviation = 0.5 * (ci.hi - ci.lo);
    }
    entry.accuracy_ok = entry.accuracy_deviation < 0.5 * params.epsilon;

    report.overall = report.overall && entry.ok();
    report.pairs.push_back(entry);
  }
  return report;
}

}  // namespace fairpairs
