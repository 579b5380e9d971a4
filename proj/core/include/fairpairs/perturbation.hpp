// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fairpairs/rng.hpp"
#include "fairpairs/types.hpp"

namespace fairpairs {

// The presentation randomization works on adjacent pairs of ranks. For each
// impression an offset k in {0, 1} is drawn, the list is partitioned into the
// pairs (1+k, 2+k), (3+k, 4+k), ... and each pair is independently left alone
// or swapped with probability one half. A click on the lower result of a pair
// is read as "the clicked document beats the one right above it": the user
// very likely examined the upper result on the way down, so preferring the
// lower one is an active choice rather than a position effect. Because each
// orientation of a pair is shown equally often, these votes estimate a
// preference that is not confounded by presentation order, while no document
// ever moves more than one rank from where the base ranker put it.

// One pair of presented ranks; bottom == top + 1 always.
struct RankPair {
  int top = 0;
  int bottom = 0;
  bool operator==(const RankPair&) const = default;
};

// Which ranks of an n-long list form pairs for a given offset k. Ranks that
// the pairing leaves over at the front (rank 1 when k = 1) or at the back
// (odd tail) are listed in `unpaired`; they are never swapped and never
// generate votes.
struct PairAssignment {
  std::vector<RankPair> pairs;
  std::vector<int> unpaired;
  bool operator==(const PairAssignment&) const = default;
};

// Randomization record for one impression: the offset plus one swap flag per
// pair, in PairAssignment order. Together with the input list this fully
// determines the presented order.
struct FlipPlan {
  int k = 0;
  std::vector<bool> swap_flags;
  bool operator==(const FlipPlan&) const = default;
};

// A list after perturbation, keeping what is needed to interpret clicks.
struct PerturbedList {
  RankedList order;     // what the user saw
  FlipPlan plan;
  RankedList original;  // the list the plan was applied to
  bool operator==(const PerturbedList&) const = default;
};

// One pairwise preference vote: winner judged more relevant than loser.
struct PreferenceVote {
  DocumentId winner;
  DocumentId loser;
  std::string query_id;
  bool operator==(const PreferenceVote&) const = default;
};

// Pair assignment for list length n and offset k. Throws Error unless
// n >= 1 and k is 0 or 1.
PairAssignment assign_pairs(int n, int k);

// Draws the randomization for one impression: first the offset k (uniform on
// {0, 1}), then one fair swap flag per pair, in pair order. Identical
// (stream state, n) gives identical plans.
FlipPlan draw_flip_plan(int n, RngStream& rng);

// Applies a plan to a list. Swapping is an involution per pair, so applying
// the same plan twice restores the input. Throws PlanSizeMismatchError when
// the flag count does not match the pair count for (n, k).
PerturbedList apply_flip_plan(const RankedList& input, const FlipPlan& plan);

// Reads clicks on pair bottoms as preference votes (clicked document beats
// the document presented directly above it). Clicks on pair tops and on
// unpaired ranks yield nothing. Ranks are 1-based positions in the presented
// list; out-of-range ranks throw RankOutOfRangeError. Repeated ranks vote
// repeatedly.
std::vector<PreferenceVote> extract_preferences(
    const PerturbedList& perturbed, const std::vector<int>& clicked_ranks,
    std::string_view query_id = {});

// Companion stream reading clicks on pair *tops* as "top beats bottom".
// Collected for diagnostics only: such clicks say little, because the user
// may never have examined the result below the one clicked.
std::vector<PreferenceVote> extract_top_preferences(
    const PerturbedList& perturbed, const std::vector<int>& clicked_ranks,
    std::string_view query_id = {});

// Exact distribution of presented ranks: entry [i][j] is the probability
// that the document at 1-based input rank i+1 is shown at rank j+1, computed
// by enumerating every (k, swap flags) outcome. Only feasible for small n;
// throws Error when n exceeds 30.
std::vector<std::vector<double>> marginal_rank_distribution(int n);

}  // namespace fairpairs
