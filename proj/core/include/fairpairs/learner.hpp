// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fairpairs/pair_stats.hpp"
#include "fairpairs/types.hpp"

namespace fairpairs {

// Number of collected preference votes a ranking contradicts: each click on
// document i presented below document j is one vote for "i beats j", and a
// ranking placing i below j disagrees with all of them. Once the two
// orientations of every pair have been shown equally often, the ranking
// minimizing this count recovers the relevance order — the balanced
// presentation makes the vote surplus of the correct orientation strictly
// positive for every pair.
using ErrorCount = std::uint64_t;

// Votes in `stats` contradicted by `ranking` (earlier position = ranked
// higher). Throws MissingDocumentError when the stats mention a document the
// ranking lacks, Error when the ranking repeats a document.
ErrorCount error_rate(const RankedList& ranking, const PairStats& stats);

// Global error-rate minimizer over all permutations of `documents`. Among
// minimizers, returns the lexicographically smallest (by document id), so
// the result is deterministic. Throws TooManyDocumentsError above 10
// documents — 10! permutations is where exhaustion stops being a sensible
// idea — and Error on duplicate documents.
RankedList minimize_error_exhaustive(const PairStats& stats,
                                     std::vector<DocumentId> documents);

// Greedy stand-in for larger candidate sets: orders documents by net vote
// surplus (votes won minus votes lost), breaking ties by impression count
// and then id. Exact whenever the surplus order coincides with the pairwise
// majority order (uniform margins, for instance); in general it returns a
// valid permutation that may not attain the minimum — lopsided margins or
// majority cycles can both mislead it.
RankedList minimize_error_greedy(const PairStats& stats,
                                 std::vector<DocumentId> documents);

// Baseline vote extractor: a click prefers the clicked document over every
// unclicked document presented above it. Position bias pushes these votes
// systematically toward documents presented low, which is exactly what the
// paired randomization avoids; kept as a comparison stream. Duplicate
// clicked ranks are collapsed. Throws RankOutOfRangeError.
std::vector<PreferenceVote> skip_above_extractor(
    const RankedList& presented, const std::vector<int>& clicked_ranks,
    std::string_view query_id = {});

// Absolute (non-pairwise) vote: a click endorses the clicked document alone.
struct AbsoluteVote {
  DocumentId doc;
  std::string query_id;
  bool operator==(const AbsoluteVote&) const = default;
};

// Baseline treating each click as an absolute relevance endorsement.
// Heavily confounded by position bias: documents presented first collect
// votes merely for being examined first. Duplicate clicked ranks are
// collapsed. Throws RankOutOfRangeError.
std::vector<AbsoluteVote> naive_extractor(const RankedList& presented,
                                          const std::vector<int>& clicked_ranks,
                                          std::string_view query_id = {});

}  // namespace fairpairs
