// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/pair_stats.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <string>

#include "csv_util.hpp"
#include "fairpairs/statistics.hpp"

namespace fairpairs {

void PairStats::add_impression(const DocumentId& bottom, const DocumentId& top,
                               std::uint64_t clicks_on_bottom) {
  auto& counts = counts_[{bottom, top}];
  counts.impressions += 1;
  counts.clicks += clicks_on_bottom;
}

void PairStats::add_preference(const DocumentId& winner,
                               const DocumentId& loser) {
  counts_[{winner, loser}].clicks += 1;
}

std::uint64_t PairStats::impressions(const DocumentId& bottom,
                                     const DocumentId& top) const {
  const auto it = counts_.find({bottom, top});
  return it == counts_.end() ? 0 : it->second.impressions;
}

std::uint64_t PairStats::clicks(const DocumentId& bottom,
                                const DocumentId& top) const {
  const auto it = counts_.find({bottom, top});
  return it == counts_.end() ? 0 : it->second.clicks;
}

void PairStats::add_counts(const DocumentId& bottom, const DocumentId& top,
                           const PairCounts& counts) {
  auto& mine = counts_[{bottom, top}];
  mine.impressions += counts.impressions;
  mine.clicks += counts.clicks;
}

void PairStats::merge(const PairStats& other) {
  for (const auto& [key, counts] : other.counts_) {
    add_counts(key.first, key.second, counts);
  }
}

std::vector<DocumentId> PairStats::documents() const {
  std::set<DocumentId> unique;
  for (const auto& [key, counts] : counts_) {
    unique.insert(key.first);
    unique.insert(key.second);
  }
  return {unique.begin(), unique.end()};
}

void record_votes(PairStats& stats, const ClickLogRecord& impression) {
  const auto replay =
      apply_flip_plan(impression.original_order, impression.plan);
  if (replay.order != impression.presented_order) {
    throw InconsistentRecordError(
        "impression '" + impression.query_id +
        "': presented order does not follow from original order and plan");
  }
  const int n = impression.presented_order.size();
  std::vector<std::uint64_t> clicks_at(n + 1, 0);
  for (int rank : impression.clicked_ranks) {
    if (rank < 1 || rank > n) {
      throw RankOutOfRangeError("impression '" + impression.query_id +
                                "': clicked rank " + std::to_string(rank) +
                                " outside 1.." + std::to_string(n));
    }
    clicks_at[rank] += 1;
  }
  const auto assignment = assign_pairs(n, impression.plan.k);
  for (const auto& pair : assignment.pairs) {
    stats.add_impression(impression.presented_order.order[pair.bottom - 1],
                         impression.presented_order.order[pair.top - 1],
                         clicks_at[pair.bottom]);
  }
}

double estimate_p(const PairStats& stats, const DocumentId& bottom,
                  const DocumentId& top) {
  const auto n = stats.impressions(bottom, top);
  if (n == 0) {
    throw NoDataError("no impressions of '" + bottom.value +
                      "' directly below '" + top.value + "'");
  }
  return static_cast<double>(stats.clicks(bottom, top)) /
         static_cast<double>(n);
}

namespace {
constexpr const char* kStatsHeader = "doc_i,doc_j,n_ij,c_ij,p_ij,ci_lo,ci_hi";
}

void write_stats_csv(const PairStats& stats, std::ostream& out,
                     double confidence) {
  out << kStatsHeader << "\n";
  for (const auto& [key, counts] : stats.entries()) {
    out << csv::escape(key.first.value) << ',' << csv::escape(key.second.value)
        << ',' << counts.impressions << ',' << counts.clicks << ',';
    if (counts.impressions > 0) {
      const double p = static_cast<double>(counts.clicks) /
                       static_cast<double>(counts.impressions);
      const auto ci =
          wilson_interval(counts.clicks, counts.impressions, confidence);
      out << csv::format_fixed(p, 6) << ',' << csv::format_fixed(ci.lo, 6)
          << ',' << csv::format_fixed(ci.hi, 6);
    } else {
      // Vote-only streams carry no impression denominator; the derived
      // columns stay empty rather than reporting a fake rate.
      out << ",,";
    }
    out << "\n";
  }
}

PairStats read_stats_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!csv::read_line(in, line)) {
    throw ParseError(line_no, "missing stats CSV header");
  }
  if (line != kStatsHeader) {
    throw ParseError(line_no, "unexpected stats CSV header '" + line + "'");
  }
  PairStats stats;
  std::set<PairStats::Key> seen;
  while (csv::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = csv::parse_line(line, line_no);
    if (fields.size() != 7) {
      throw ParseError(line_no, "expected 7 fields, got " +
                           std::to_string(fields.size()));
    }
    DocumentId bottom{fields[0]};
    DocumentId top{fields[1]};
    if (!seen.insert({bottom, top}).second) {
      throw ParseError(line_no, "duplicate pair (" + fields[0] + ", " +
                           fields[1] + ")");
    }
    std::uint64_t impressions = 0;
    std::uint64_t clicks = 0;
    try {
      impressions = std::stoull(fields[2]);
      clicks = std::stoull(fields[3]);
    } catch (const std::exception&) {
      throw ParseError(line_no, "malformed count in stats CSV");
    }
    // Vote-only rows (impressions 0) may carry clicks; otherwise clicks can
    // never exceed the impressions they came from.
    if (impressions > 0 && clicks > impressions) {
      throw ParseError(line_no, "clicks exceed impressions");
    }
    // Derived columns (p_ij, ci_lo, ci_hi) are recomputable and ignored.
    stats.add_counts(bottom, top, PairCounts{impressions, clicks});
  }
  return stats;
}

}  // namespace fairpairs
