// Copyright 2026 The moraldir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "moraldir/text_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "moraldir/error.hpp"

namespace moraldir {

std::string ReadFileToString(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open file for reading", path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<CsvRow> ParseCsv(std::string_view text, std::string_view source) {
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool in_quotes = false;
    bool quoted_field = false;
    bool row_done = false;
    while (i < n && !row_done) {
      char c = text[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          in_quotes = false;
          ++i;
          continue;
        }
        if (c == '\n') ++line;
        field.push_back(c);
        ++i;
        continue;
      }
      switch (c) {
        case '"':
          if (!field.empty() || quoted_field) {
            throw Error(ErrorCode::kParse, "unexpected quote inside unquoted CSV field",
                        std::string(source) + ":" + std::to_string(line));
          }
          in_quotes = true;
          quoted_field = true;
          ++i;
          break;
        case ',':
          row.fields.push_back(std::move(field));
          field.clear();
          quoted_field = false;
          ++i;
          break;
        case '\r':
          ++i;
          break;
        case '\n':
          ++line;
          ++i;
          row_done = true;
          break;
        default:
          field.push_back(c);
          ++i;
      }
    }
    if (in_quotes) {
      throw Error(ErrorCode::kParse, "unterminated quoted CSV field",
                  std::string(source) + ":" + std::to_string(row.line));
    }
    row.fields.push_back(std::move(field));
    bool blank = row.fields.size() == 1 && row.fields[0].find_first_not_of(" \t") == std::string::npos &&
                 !quoted_field;
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvLine(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += CsvEscape(fields[i]);
  }
  out += '\n';
  return out;
}

std::string FormatSig6(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

double ParseDouble(std::string_view text, std::string_view context) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) {
    throw Error(ErrorCode::kParse, "expected a number, got an empty field", std::string(context));
  }
  s = s.substr(first, last - first + 1);
  char* end = nullptr;
  double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw Error(ErrorCode::kParse, "not a valid number: '" + s + "'", std::string(context));
  }
  return value;
}

}  // namespace moraldir
