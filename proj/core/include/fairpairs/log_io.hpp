// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairpairs/click_log.hpp"

namespace fairpairs {

// Click logs are newline-delimited JSON, one impression per line, with
// object keys in sorted order so identical runs serialize to identical
// bytes. Fields per line: clicked_ranks, k, original_order, presented_order,
// query_id, seed_info (a [seed, index] pair), swap_flags. Writers can
// optionally add a `timestamp` field (seconds since the Unix epoch);
// it is off by default because it breaks byte-for-byte reproducibility,
// and readers ignore it. A line may carry `"schema": 1`; any other schema
// value is rejected with VersionError. Unknown fields are rejected with
// ParseError, which carries the offending 1-based line number.

std::string to_log_line(const ClickLogRecord& record);
ClickLogRecord from_log_line(const std::string& line, std::size_t line_no = 1);

void write_log(const std::vector<ClickLogRecord>& records, std::ostream& out,
               bool with_timestamps = false);
void write_log(const std::vector<ClickLogRecord>& records,
               const std::filesystem::path& path, bool with_timestamps = false);

std::vector<ClickLogRecord> read_log(std::istream& in);
std::vector<ClickLogRecord> read_log(const std::filesystem::path& path);

}  // namespace fairpairs
