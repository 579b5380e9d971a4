// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairpairs/click_log.hpp"
#include "fairpairs/config.hpp"
#include "fairpairs/convergence.hpp"
#include "fairpairs/learner.hpp"
#include "fairpairs/pair_stats.hpp"

namespace fairpairs {

// Simulates impression number `index` of a run: derives the impression's
// random stream from (seed, index), draws the flip plan, perturbs the base
// ranking of `query`, and simulates the user session. The record's query_id
// is "q<index+1>". Every simulation entry point funnels through this
// function, so a run is reproducible impression-by-impression from its seed
// alone, and sharding a run by index ranges cannot change its output.
ClickLogRecord simulate_impression(const Query& query,
                                   const ClickModelSpec& model,
                                   std::uint64_t seed, std::uint64_t index);

// Everything one simulation run produces. Streams for extractors that were
// not enabled stay empty.
struct SimulationResult {
  std::vector<ClickLogRecord> log;
  PairStats fairpairs;                         // paired-click votes
  PairStats skip_above;                        // baseline pairwise votes
  std::vector<std::uint64_t> naive_rank_votes; // naive votes by presented rank
  Query query;
};

// Runs config.num_queries impressions of the configured query and
// accumulates the enabled vote streams. Ignores config.probe (see
// run_probe_experiment).
SimulationResult run_simulation(const ExperimentConfig& config);

// True bottom-click probabilities for every adjacent pair of the base
// ranking, in both orientations, derived from the click model in closed
// form. Only adjacent documents ever share a pair, so these are exactly the
// probabilities the paired counts estimate. Requires cascade_stop == 0 (the
// closed form assumes independent clicks); throws Error otherwise.
PairProbabilities adjacent_pair_probabilities(const Query& query,
                                              const ClickModelSpec& model);

// One row of a pair-outcome report. The label names a pair configuration by
// base rank: "3-4" means the document at base rank 3 was presented directly
// above the one at base rank 4; "#" stands for the probe document. Group
// rows aggregate labels of one kind: "normal" (base-adjacent, base order),
// "reversed" (base-adjacent, swapped), "probe_bottom", "probe_top", and
// "other" (pairs of regular documents pushed together by probe placement).
struct ReportRow {
  std::string label;
  std::uint64_t impressions = 0;
  std::uint64_t clicks = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool operator==(const ReportRow&) const = default;
};

struct ReportTable {
  std::vector<ReportRow> rows;
  const ReportRow* find(const std::string& label) const;
  bool operator==(const ReportTable&) const = default;
};

// Tallies bottom-click outcomes per pair configuration over a log. `base`
// supplies the base rank labels; a document not in `base` must be the probe
// (labelled "#"), anything else is a MissingDocumentError. Group rows come
// first, then the per-label rows; rows the log never realized are omitted,
// so an empty log yields an empty table.
ReportTable build_report_table(const std::vector<ClickLogRecord>& log,
                               const RankedList& base,
                               const std::optional<DocumentId>& probe_doc,
                               double confidence = 0.95);

// Result of a probe run: the usual log plus the pair-outcome table with the
// probe labelled "#".
struct ProbeResult {
  ReportTable table;
  std::vector<ClickLogRecord> log;
  Query query;      // candidate set including the probe document
  DocumentId probe_doc;
};

// Probe experiment: appends a document with the configured low relevance to
// the candidate set and, per impression, moves it to a target rank drawn
// uniformly from [target_rank_lo, target_rank_hi]. Depending on
// probe.swap_before_fairpairs the move happens before or after the pair
// randomization. Requires config.probe and a probe relevance strictly below
// every regular relevance (ProbeRelevanceError otherwise).
ProbeResult run_probe_experiment(const ExperimentConfig& config);

namespace detail {

// Per-run state hoisted out of the per-impression path. Build once, then
// simulate any impression index against it.
struct SimContext {
  RankedList base;
  std::map<DocumentId, Relevance> relevances;
  ClickModelSpec model;
};

SimContext make_context(const Query& query, const ClickModelSpec& model);
ClickLogRecord simulate_impression(const SimContext& ctx, std::uint64_t seed,
                                   std::uint64_t index);

}  // namespace detail

}  // namespace fairpairs
