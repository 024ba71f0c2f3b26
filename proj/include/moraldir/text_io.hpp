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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace moraldir {

// Reads a whole file; throws Error(kIo) if it cannot be opened.
std::string ReadFileToString(const std::filesystem::path& path);

struct CsvRow {
  std::size_t line = 0;  // 1-based line where the row starts
  std::vector<std::string> fields;
};

// RFC 4180 style parsing: quoted fields, doubled quotes, embedded newlines.
// Blank lines are skipped. `source` is used in parse error context.
std::vector<CsvRow> ParseCsv(std::string_view text, std::string_view source);

std::string CsvEscape(std::string_view field);
std::string CsvLine(const std::vector<std::string>& fields);

// Fixed 6-significant-digit formatting used by every CSV report.
std::string FormatSig6(double value);

// Strict full-string conversion; throws Error(kParse) with `context`.
double ParseDouble(std::string_view text, std::string_view context);

}  // namespace moraldir
