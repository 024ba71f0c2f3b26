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

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moraldir/moral_direction.hpp"

namespace moraldir {

// Sample Pearson correlation. Throws kPrecondition on length mismatch or
// fewer than 2 points, kInsufficientVariance when either side is constant.
double Pearson(std::span<const double> x, std::span<const double> y);

// Rectangular table of finite scores; rows are statements or verbs, columns
// are "model_id/language".
class ScoreTable {
 public:
  ScoreTable() = default;
  ScoreTable(std::vector<std::string> row_ids, std::vector<std::string> column_ids,
             std::vector<double> cells);

  static ScoreTable Parse(std::string_view csv, std::string_view source);
  static ScoreTable Load(const std::filesystem::path& path);

  // Inner join on row id; column ids must not collide. Row order follows the
  // first table.
  static ScoreTable Join(std::span<const ScoreTable> tables);

  const std::vector<std::string>& row_ids() const { return row_ids_; }
  const std::vector<std::string>& column_ids() const { return column_ids_; }
  std::size_t rows() const { return row_ids_.size(); }
  std::size_t columns() const { return column_ids_.size(); }

  double at(std::size_t row, std::size_t column) const { return cells_[row * columns() + column]; }
  std::optional<std::size_t> ColumnIndex(std::string_view column_id) const;
  std::vector<double> Column(std::size_t column) const;
  std::vector<double> Row(std::size_t row) const;

  void set_polarities(std::vector<std::optional<Polarity>> polarities);
  const std::vector<std::optional<Polarity>>& polarities() const { return polarities_; }

  std::string ToCsv() const;

 private:
  std::vector<std::string> row_ids_;
  std::vector<std::string> column_ids_;
  std::vector<double> cells_;
  std::vector<std::optional<Polarity>> polarities_;
};

// Pearson r between `column` and a reference keyed by row id, over the rows
// present in both. Throws kInsufficientData with fewer than 2 shared rows.
struct ReferenceCorrelation {
  std::string column_id;
  double r = 0.0;
  std::size_t n_shared = 0;
};
ReferenceCorrelation CorrelationWithReference(const ScoreTable& table, std::string_view column_id,
                                              const std::map<std::string, double>& reference);

// user-study style reference: CSV "row_id,value".
std::map<std::string, double> ParseReference(std::string_view csv, std::string_view source);
std::map<std::string, double> LoadReference(const std::filesystem::path& path);

enum class DiagonalSemantics { kSelf, kCrossFamily };

struct CorrelationMatrix {
  std::vector<std::string> labels;
  std::vector<double> values;  // row-major labels.size()^2
  DiagonalSemantics semantics = DiagonalSemantics::kSelf;

  std::size_t size() const { return labels.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }

  std::string ToCsv() const;
};

// Pairwise Pearson over the selected columns (all columns when empty). The
// diagonal is exactly 1.
CorrelationMatrix ComputeCorrelationMatrix(const ScoreTable& table,
                                           std::span<const std::string> columns = {});

// Two-family layout over the languages present in both families: below the
// diagonal family A, above it family B, and on the diagonal A versus B for
// the same language. Columns are matched as "<family>/<language>".
CorrelationMatrix ComputeCompositeMatrix(const ScoreTable& table, std::string_view family_a,
                                         std::string_view family_b);

enum class VarianceGroup { kPositive, kNegative };

std::string_view VarianceGroupName(VarianceGroup group);

struct FiveNumberSummary {
  std::size_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Linear-interpolation quantiles. NaN fields when `values` is empty.
FiveNumberSummary Summarize(std::vector<double> values);

struct VarianceRow {
  std::string row_id;
  double mean = 0.0;
  double variance = 0.0;  // sample (n-1) variance across columns
  VarianceGroup group = VarianceGroup::kPositive;
  bool zero_mean = false;  // mean was exactly 0, assigned to positive
};

struct VarianceReport {
  std::vector<VarianceRow> rows;
  FiveNumberSummary positive;
  FiveNumberSummary negative;
  std::size_t zero_mean_rows = 0;
};

VarianceReport VarianceAnalysis(const ScoreTable& table);

double SampleMean(std::span<const double> values);
double SampleVariance(std::span<const double> values);

}  // namespace moraldir
