// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "fairpairs/click_log.hpp"
#include "fairpairs/types.hpp"

namespace fairpairs {

// Counts for one ordered document pair (i, j), read as "i presented directly
// below j inside a pair".
struct PairCounts {
  std::uint64_t impressions = 0;  // times the configuration was shown
  std::uint64_t clicks = 0;       // times i was clicked in it
  bool operator==(const PairCounts&) const = default;
};

// Accumulated pairwise counts, keyed by (bottom document, top document).
// Merging is an entrywise sum, which makes accumulation a commutative
// monoid: shards of a log can be counted in any grouping or order and merged
// into the same totals.
class PairStats {
 public:
  using Key = std::pair<DocumentId, DocumentId>;
  using Map = std::map<Key, PairCounts>;

  // Records one presentation of `top` directly above `bottom`, together with
  // how many clicks landed on `bottom` in it.
  void add_impression(const DocumentId& bottom, const DocumentId& top,
                      std::uint64_t clicks_on_bottom);

  // Records one abstract "winner beats loser" vote with no impression
  // denominator of its own; used for vote streams (e.g. baselines) where
  // only click counts are meaningful.
  void add_preference(const DocumentId& winner, const DocumentId& loser);

  // Adds a whole block of counts to one pair (entrywise).
  void add_counts(const DocumentId& bottom, const DocumentId& top,
                  const PairCounts& counts);

  std::uint64_t impressions(const DocumentId& bottom,
                            const DocumentId& top) const;
  std::uint64_t clicks(const DocumentId& bottom, const DocumentId& top) const;

  void merge(const PairStats& other);

  // Every document mentioned by any pair, sorted and unique.
  std::vector<DocumentId> documents() const;

  bool empty() const { return counts_.empty(); }
  const Map& entries() const { return counts_; }

  bool operator==(const PairStats&) const = default;

 private:
  Map counts_;
};

// Replays one logged impression into `stats`: every pair of the impression
// contributes one impression count for its presented (bottom, top)
// orientation, plus a click count when its bottom was clicked. Throws
// InconsistentRecordError when the record's presented order does not follow
// from its original order and flip plan, and RankOutOfRangeError for clicked
// ranks outside the list.
void record_votes(PairStats& stats, const ClickLogRecord& impression);

// Empirical click rate clicks/impressions for the ordered pair (bottom,
// top). Throws NoDataError when the pair was never shown.
double estimate_p(const PairStats& stats, const DocumentId& bottom,
                  const DocumentId& top);

// CSV export/import of the counts (columns doc_i, doc_j, n_ij, c_ij, p_ij,
// ci_lo, ci_hi, where i is the pair bottom and j the top). Import reads the
// counts and ignores the derived columns. Throws ParseError with a 1-based
// line number on malformed input.
void write_stats_csv(const PairStats& stats, std::ostream& out,
                     double confidence = 0.95);
PairStats read_stats_csv(std::istream& in);

}  // namespace fairpairs
