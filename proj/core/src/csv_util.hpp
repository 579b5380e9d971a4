// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

// Small internal CSV helpers shared by the writers/readers in this library.
// Quoting follows RFC 4180: fields containing commas, quotes, or newlines
// are wrapped in double quotes with embedded quotes doubled. Lines always
// end in a single LF.

#include <cstdio>
#include <istream>
#include <string>
#include <vector>

#include "fairpairs/errors.hpp"

namespace fairpairs::csv {

inline std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV line into fields, honoring quoting. `line_no` is used for
// error reporting only.
inline std::vector<std::string> parse_line(const std::string& line,
                                           std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) throw ParseError(line_no, "unterminated quoted CSV field");
  fields.push_back(std::move(current));
  return fields;
}

// Reads one line, tolerating CRLF endings. Returns false at end of input.
inline bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace fairpairs::csv
