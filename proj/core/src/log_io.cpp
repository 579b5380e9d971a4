// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/log_io.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fairpairs {

namespace {

using nlohmann::json;

json record_to_json(const ClickLogRecord& record) {
  json j;
  j["query_id"] = record.query_id;
  j["k"] = record.plan.k;
  j["swap_flags"] = record.plan.swap_flags;
  json original = json::array();
  for (const auto& doc : record.original_order.order) original.push_back(doc.value);
  j["original_order"] = std::move(original);
  json presented = json::array();
  for (const auto& doc : record.presented_order.order)
    presented.push_back(doc.value);
  j["presented_order"] = std::move(presented);
  j["clicked_ranks"] = record.clicked_ranks;
  j["seed_info"] =
      json::array({record.seed_info.experiment_seed, record.seed_info.query_index});
  return j;
}

const std::set<std::string> kKnownKeys = {
    "clicked_ranks", "k", "original_order", "presented_order",
    "query_id",      "schema", "seed_info", "swap_flags", "timestamp"};

[[noreturn]] void fail(std::size_t line_no, const std::string& message) {
  throw ParseError(line_no, message);
}

ClickLogRecord record_from_json(const json& j, std::size_t line_no) {
  if (!j.is_object()) fail(line_no, "log line is not a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.contains(key)) fail(line_no, "unknown field '" + key + "'");
  }
  if (j.contains("schema")) {
    if (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1) {
      throw VersionError("line " + std::to_string(line_no) +
                         ": unsupported log schema version");
    }
  }
  for (const char* key : {"query_id", "k", "swap_flags", "original_order",
                          "presented_order", "clicked_ranks", "seed_info"}) {
    if (!j.contains(key)) fail(line_no, std::string("missing field '") + key + "'");
  }

  ClickLogRecord record;
  if (!j["query_id"].is_string()) fail(line_no, "query_id must be a string");
  record.query_id = j["query_id"].get<std::string>();

  if (!j["k"].is_number_integer()) fail(line_no, "k must be an integer");
  record.plan.k = j["k"].get<int>();
  if (record.plan.k != 0 && record.plan.k != 1) fail(line_no, "k must be 0 or 1");

  if (!j["swap_flags"].is_array()) fail(line_no, "swap_flags must be an array");
  for (const auto& flag : j["swap_flags"]) {
    if (!flag.is_boolean()) fail(line_no, "swap_flags entries must be booleans");
    record.plan.swap_flags.push_back(flag.get<bool>());
  }

  auto read_order = [&](const char* key, RankedList& out) {
    if (!j[key].is_array()) fail(line_no, std::string(key) + " must be an array");
    for (const auto& doc : j[key]) {
      if (!doc.is_string()) {
        fail(line_no, std::string(key) + " entries must be strings");
      }
      out.order.push_back(DocumentId{doc.get<std::string>()});
    }
  };
  read_order("original_order", record.original_order);
  read_order("presented_order", record.presented_order);
  if (record.original_order.size() != record.presented_order.size()) {
    fail(line_no, "original_order and presented_order differ in length");
  }
  if (record.original_order.order.empty()) {
    fail(line_no, "original_order must not be empty");
  }
  // The flag count is determined by (n, k); checking here gives corrupted
  // lines a line number instead of a later replay failure.
  const auto expected_pairs =
      assign_pairs(record.original_order.size(), record.plan.k).pairs.size();
  if (record.plan.swap_flags.size() != expected_pairs) {
    fail(line_no, "swap_flags count does not match list length and offset");
  }

  if (!j["clicked_ranks"].is_array()) {
    fail(line_no, "clicked_ranks must be an array");
  }
  const int n = record.presented_order.size();
  int previous = 0;
  for (const auto& rank_json : j["clicked_ranks"]) {
    if (!rank_json.is_number_integer()) {
      fail(line_no, "clicked_ranks entries must be integers");
    }
    const int rank = rank_json.get<int>();
    if (rank < 1 || rank > n) {
      fail(line_no, "clicked rank " + std::to_string(rank) + " outside 1.." +
                        std::to_string(n));
    }
    if (rank <= previous) {
      fail(line_no, "clicked_ranks must be strictly increasing");
    }
    previous = rank;
    record.clicked_ranks.push_back(rank);
  }

  const auto& seed_info = j["seed_info"];
  if (!seed_info.is_array() || seed_info.size() != 2 ||
      !seed_info[0].is_number_unsigned() || !seed_info[1].is_number_unsigned()) {
    fail(line_no, "seed_info must be a [seed, index] pair of unsigned integers");
  }
  record.seed_info.experiment_seed = seed_info[0].get<std::uint64_t>();
  record.seed_info.query_index = seed_info[1].get<std::uint64_t>();
  return record;
}

}  // namespace

std::string to_log_line(const ClickLogRecord& record) {
  // nlohmann::json keeps object keys sorted, which pins the byte layout.
  return record_to_json(record).dump();
}

ClickLogRecord from_log_line(const std::string& line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
  }
  return record_from_json(j, line_no);
}

void write_log(const std::vector<ClickLogRecord>& records, std::ostream& out,
               bool with_timestamps) {
  std::int64_t now = 0;
  if (with_timestamps) {
    now = std::chrono::duration_cast<std::chrono::seconds>(
              std::chrono::system_clock::now().time_since_epoch())
              .count();
  }
  for (const auto& record : records) {
    if (with_timestamps) {
      json j = record_to_json(record);
      j["timestamp"] = now;
      out << j.dump() << '\n';
    } else {
      out << to_log_line(record) << '\n';
    }
  }
}

void write_log(const std::vector<ClickLogRecord>& records,
               const std::filesystem::path& path, bool with_timestamps) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_log(records, out, with_timestamps);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ClickLogRecord> read_log(std::istream& in) {
  std::vector<ClickLogRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    records.push_back(from_log_line(line, line_no));
  }
  return records;
}

std::vector<ClickLogRecord> read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_log(in);
}

}  // namespace fairpairs
