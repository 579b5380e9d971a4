// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/report.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <string>

#include "csv_util.hpp"

namespace fairpairs {

namespace {

constexpr const char* kReportHeader =
    "pair_type,impressions,clicks,p_hat,ci_lo,ci_hi";

void write_row(std::ostream& out, const ReportRow& row) {
  out << csv::escape(row.label) << ',' << row.impressions << ',' << row.clicks
      << ',' << csv::format_fixed(row.p_hat, 6) << ','
      << csv::format_fixed(row.ci_lo, 6) << ','
      << csv::format_fixed(row.ci_hi, 6) << '\n';
}

// Splits a per-label row like "3-4" or "#-2"; returns false for group rows.
bool split_label(const std::string& label, std::string& top,
                 std::string& bottom) {
  const auto dash = label.find('-');
  if (dash == std::string::npos) return false;
  top = label.substr(0, dash);
  bottom = label.substr(dash + 1);
  return true;
}

bool is_rank(const std::string& part) {
  return !part.empty() &&
         part.find_first_not_of("0123456789") == std::string::npos;
}

void write_filtered(const ReportTable& table, const std::filesystem::path& file,
                    const std::function<bool(const ReportRow&)>& keep) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot open '" + file.string() + "' for writing");
  out << kReportHeader << '\n';
  for (const auto& row : table.rows) {
    if (keep(row)) write_row(out, row);
  }
  out.flush();
  if (!out) throw IoError("failed writing '" + file.string() + "'");
}

}  // namespace

void write_report_csv(const ReportTable& table, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const auto& row : table.rows) write_row(out, row);
}

void emit_report(const ReportTable& table,
                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + out_dir.string() +
                  "': " + ec.message());
  }

  // item_relevance: the bottom slot varies (normal pairs plus probe-bottom).
  write_filtered(table, out_dir / "item_relevance.csv",
                 [&](const ReportRow& row) {
                   if (row.label == "normal" || row.label == "probe_bottom") {
                     return true;
                   }
                   std::string top, bottom;
                   if (!split_label(row.label, top, bottom)) return false;
                   if (bottom == "#") return true;
                   if (!is_rank(top) || !is_rank(bottom)) return false;
                   return std::stoi(bottom) == std::stoi(top) + 1;
                 });

  // ignored_relevance: the top slot varies (normal pairs plus probe-top).
  write_filtered(table, out_dir / "ignored_relevance.csv",
                 [&](const ReportRow& row) {
                   if (row.label == "normal" || row.label == "probe_top") {
                     return true;
                   }
                   std::string top, bottom;
                   if (!split_label(row.label, top, bottom)) return false;
                   if (top == "#") return true;
                   if (!is_rank(top) || !is_rank(bottom)) return false;
                   return std::stoi(bottom) == std::stoi(top) + 1;
                 });

  // preference_test: both orientations of base-adjacent pairs.
  write_filtered(table, out_dir / "preference_test.csv",
                 [&](const ReportRow& row) {
                   if (row.label == "normal" || row.label == "reversed") {
                     return true;
                   }
                   std::string top, bottom;
                   if (!split_label(row.label, top, bottom)) return false;
                   if (!is_rank(top) || !is_rank(bottom)) return false;
                   const int t = std::stoi(top);
                   const int b = std::stoi(bottom);
                   return b == t + 1 || b == t - 1;
                 });

  // pair_curve: the probe's per-rank profile, no aggregate rows.
  write_filtered(table, out_dir / "pair_curve.csv", [&](const ReportRow& row) {
    std::string top, bottom;
    if (!split_label(row.label, top, bottom)) return false;
    return top == "#" || bottom == "#";
  });
}

}  // namespace fairpairs
