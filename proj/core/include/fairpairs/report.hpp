// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <filesystem>
#include <iosfwd>

#include "fairpairs/simulation.hpp"

namespace fairpairs {

// Writes every row of the table as CSV with columns pair_type, impressions,
// clicks, p_hat, ci_lo, ci_hi.
void write_report_csv(const ReportTable& table, std::ostream& out);

// Splits the table into the four standard report files under `out_dir`
// (created if needed):
//   item_relevance.csv    - normal and probe_bottom rows: how the click rate
//                           of the bottom slot tracks what sits in it
//   ignored_relevance.csv - normal and probe_top rows: how it tracks what
//                           sits *above* it
//   preference_test.csv   - normal and reversed rows: the two orientations
//                           whose comparison carries the preference signal
//   pair_curve.csv        - per-rank probe rows ("r-#" and "#-r"), the probe
//                           document's click profile across positions
// Every file gets a header even when no rows qualify. Throws IoError on
// filesystem failures.
void emit_report(const ReportTable& table, const std::filesystem::path& out_dir);

}  // namespace fairpairs
