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

#include "moraldir/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "moraldir/error.hpp"
#include "moraldir/text_io.hpp"

namespace moraldir {

double SampleMean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double SampleVariance(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "sample variance needs at least 2 values");
  }
  const double mean = SampleMean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kPrecondition, "pearson: length mismatch (" + std::to_string(x.size()) +
                                              " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "pearson needs at least 2 points");
  }
  const double mx = SampleMean(x);
  const double my = SampleMean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kInsufficientVariance, "pearson: zero variance input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// --- ScoreTable ------------------------------------------------------------

namespace {

void RequireUnique(const std::vector<std::string>& ids, const char* what) {
  std::set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kValidation, std::string("duplicate ") + what + " '" + id + "'");
    }
  }
}

}  // namespace

ScoreTable::ScoreTable(std::vector<std::string> row_ids, std::vector<std::string> column_ids,
                       std::vector<double> cells)
    : row_ids_(std::move(row_ids)), column_ids_(std::move(column_ids)), cells_(std::move(cells)) {
  if (cells_.size() != row_ids_.size() * column_ids_.size()) {
    throw Error(ErrorCode::kValidation, "score table is not rectangular");
  }
  RequireUnique(row_ids_, "row id");
  RequireUnique(column_ids_, "column id");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (!std::isfinite(cells_[i])) {
      throw Error(ErrorCode::kValidation,
                  "non-finite score at row '" + row_ids_[i / column_ids_.size()] + "'");
    }
  }
}

ScoreTable ScoreTable::Parse(std::string_view csv, std::string_view source) {
  const std::string src(source);
  auto rows = ParseCsv(csv, source);
  if (rows.empty()) throw Error(ErrorCode::kParse, "empty score table", src);
  const auto& header = rows.front().fields;
  if (header.empty() || header[0] != "row_id") {
    throw Error(ErrorCode::kParse, "score table must start with a row_id column", src + ":1");
  }
  std::optional<std::size_t> polarity_col;
  std::vector<std::string> columns;
  std::vector<std::size_t> value_cols;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] == "polarity") {
      polarity_col = c;
    } else {
      columns.push_back(header[c]);
      value_cols.push_back(c);
    }
  }
  std::vector<std::string> row_ids;
  std::vector<double> cells;
  std::vector<std::optional<Polarity>> polarities;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r].fields;
    const std::string context = src + ":" + std::to_string(rows[r].line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParse,
                  "expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()),
                  context);
    }
    row_ids.push_back(fields[0]);
    for (std::size_t c : value_cols) {
      double v = ParseDouble(fields[c], context);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kValidation, "non-finite score in column '" + header[c] + "'",
                    context);
      }
      cells.push_back(v);
    }
    if (polarity_col) {
      const auto& p = fields[*polarity_col];
      if (p.empty()) {
        polarities.push_back(std::nullopt);
      } else if (auto parsed = PolarityFromName(p)) {
        polarities.push_back(parsed);
      } else {
        throw Error(ErrorCode::kValidation, "invalid polarity '" + p + "'", context);
      }
    }
  }
  try {
    ScoreTable table(std::move(row_ids), std::move(columns), std::move(cells));
    if (polarity_col) table.set_polarities(std::move(polarities));
    return table;
  } catch (const Error& e) {
    throw e.WithContext(src);
  }
}

ScoreTable ScoreTable::Load(const std::filesystem::path& path) {
  return Parse(ReadFileToString(path), path.string());
}

ScoreTable ScoreTable::Join(std::span<const ScoreTable> tables) {
  if (tables.empty()) return {};
  if (tables.size() == 1) return tables.front();
  std::vector<std::unordered_map<std::string, std::size_t>> indexes(tables.size());
  for (std::size_t t = 0; t < tables.size(); ++t) {
    for (std::size_t r = 0; r < tables[t].rows(); ++r) indexes[t][tables[t].row_ids()[r]] = r;
  }
  std::vector<std::string> columns;
  for (const auto& table : tables) {
    columns.insert(columns.end(), table.column_ids().begin(), table.column_ids().end());
  }
  std::vector<std::string> row_ids;
  std::vector<double> cells;
  std::vector<std::optional<Polarity>> polarities;
  for (std::size_t r = 0; r < tables.front().rows(); ++r) {
    const std::string& id = tables.front().row_ids()[r];
    bool everywhere = true;
    for (std::size_t t = 1; t < tables.size() && everywhere; ++t) {
      everywhere = indexes[t].count(id) > 0;
    }
    if (!everywhere) continue;
    row_ids.push_back(id);
    std::optional<Polarity> polarity;
    for (std::size_t t = 0; t < tables.size(); ++t) {
      std::size_t row = indexes[t].at(id);
      for (std::size_t c = 0; c < tables[t].columns(); ++c) cells.push_back(tables[t].at(row, c));
      if (!polarity && !tables[t].polarities().empty()) polarity = tables[t].polarities()[row];
    }
    polarities.push_back(polarity);
  }
  ScoreTable joined(std::move(row_ids), std::move(columns), std::move(cells));
  bool any_polarity = std::any_of(tables.begin(), tables.end(),
                                  [](const ScoreTable& t) { return !t.polarities().empty(); });
  if (any_polarity) joined.set_polarities(std::move(polarities));
  return joined;
}

std::optional<std::size_t> ScoreTable::ColumnIndex(std::string_view column_id) const {
  for (std::size_t c = 0; c < column_ids_.size(); ++c) {
    if (column_ids_[c] == column_id) return c;
  }
  return std::nullopt;
}

std::vector<double> ScoreTable::Column(std::size_t column) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, column);
  return out;
}

std::vector<double> ScoreTable::Row(std::size_t row) const {
  auto begin = cells_.begin() + static_cast<std::ptrdiff_t>(row * columns());
  return std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(columns()));
}

void ScoreTable::set_polarities(std::vector<std::optional<Polarity>> polarities) {
  if (!polarities.empty() && polarities.size() != rows()) {
    throw Error(ErrorCode::kValidation, "polarity list does not match the row count");
  }
  polarities_ = std::move(polarities);
}

std::string ScoreTable::ToCsv() const {
  std::vector<std::string> header{"row_id"};
  header.insert(header.end(), column_ids_.begin(), column_ids_.end());
  if (!polarities_.empty()) header.push_back("polarity");
  std::string out = CsvLine(header);
  for (std::size_t r = 0; r < rows(); ++r) {
    std::vector<std::string> fields{row_ids_[r]};
    for (std::size_t c = 0; c < columns(); ++c) fields.push_back(FormatSig6(at(r, c)));
    if (!polarities_.empty()) {
      fields.emplace_back(polarities_[r] ? PolarityName(*polarities_[r]) : "");
    }
    out += CsvLine(fields);
  }
  return out;
}

// --- reference correlations ------------------------------------------------

ReferenceCorrelation CorrelationWithReference(const ScoreTable& table, std::string_view column_id,
                                              const std::map<std::string, double>& reference) {
  auto column = table.ColumnIndex(column_id);
  if (!column) {
    throw Error(ErrorCode::kNotFound, "no column '" + std::string(column_id) + "' in score table");
  }
  std::vector<double> x, y;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    auto it = reference.find(table.row_ids()[r]);
    if (it == reference.end()) continue;
    x.push_back(table.at(r, *column));
    y.push_back(it->second);
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "column '" + std::string(column_id) + "' shares " + std::to_string(x.size()) +
                    " row(s) with the reference; need at least 2");
  }
  return ReferenceCorrelation{std::string(column_id), Pearson(x, y), x.size()};
}

std::map<std::string, double> ParseReference(std::string_view csv, std::string_view source) {
  const std::string src(source);
  auto rows = ParseCsv(csv, source);
  if (rows.empty() || rows.front().fields != std::vector<std::string>{"row_id", "value"}) {
    throw Error(ErrorCode::kParse, "reference header must be row_id,value", src + ":1");
  }
  std::map<std::string, double> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string context = src + ":" + std::to_string(rows[r].line);
    const auto& fields = rows[r].fields;
    if (fields.size() != 2) throw Error(ErrorCode::kParse, "expected 2 fields", context);
    double v = ParseDouble(fields[1], context);
    if (!std::isfinite(v)) throw Error(ErrorCode::kValidation, "non-finite reference", context);
    if (!out.emplace(fields[0], v).second) {
      throw Error(ErrorCode::kValidation, "duplicate row_id '" + fields[0] + "'", context);
    }
  }
  return out;
}

std::map<std::string, double> LoadReference(const std::filesystem::path& path) {
  return ParseReference(ReadFileToString(path), path.string());
}

// --- correlation matrices --------------------------------------------------

std::string CorrelationMatrix::ToCsv() const {
  std::vector<std::string> header{semantics == DiagonalSemantics::kSelf ? "label" : "language"};
  header.insert(header.end(), labels.begin(), labels.end());
  std::string out = CsvLine(header);
  for (std::size_t i = 0; i < size(); ++i) {
    std::vector<std::string> fields{labels[i]};
    for (std::size_t j = 0; j < size(); ++j) fields.push_back(FormatSig6(at(i, j)));
    out += CsvLine(fields);
  }
  return out;
}

CorrelationMatrix ComputeCorrelationMatrix(const ScoreTable& table,
                                           std::span<const std::string> columns) {
  std::vector<std::size_t> selected;
  CorrelationMatrix m;
  if (columns.empty()) {
    for (std::size_t c = 0; c < table.columns(); ++c) selected.push_back(c);
    m.labels = table.column_ids();
  } else {
    for (const auto& id : columns) {
      auto c = table.ColumnIndex(id);
      if (!c) throw Error(ErrorCode::kNotFound, "no column '" + id + "' in score table");
      selected.push_back(*c);
      m.labels.push_back(id);
    }
  }
  if (selected.size() < 2) {
    throw Error(ErrorCode::kPrecondition, "a correlation matrix needs at least 2 columns");
  }
  const std::size_t k = selected.size();
  std::vector<std::vector<double>> data;
  for (std::size_t c : selected) data.push_back(table.Column(c));
  m.values.assign(k * k, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double r = Pearson(data[i], data[j]);
      m.values[i * k + j] = r;
      m.values[j * k + i] = r;
    }
  }
  return m;
}

CorrelationMatrix ComputeCompositeMatrix(const ScoreTable& table, std::string_view family_a,
                                         std::string_view family_b) {
  auto language_of = [&](const std::string& column,
                         std::string_view family) -> std::optional<std::string> {
    const std::string prefix = std::string(family) + "/";
    if (column.size() > prefix.size() && column.compare(0, prefix.size(), prefix) == 0) {
      return column.substr(prefix.size());
    }
    return std::nullopt;
  };
  std::vector<std::string> languages;
  std::vector<std::size_t> cols_a, cols_b;
  for (std::size_t c = 0; c < table.columns(); ++c) {
    auto lang = language_of(table.column_ids()[c], family_a);
    if (!lang) continue;
    auto b = table.ColumnIndex(std::string(family_b) + "/" + *lang);
    if (!b) continue;
    languages.push_back(*lang);
    cols_a.push_back(c);
    cols_b.push_back(*b);
  }
  if (languages.size() < 2) {
    throw Error(ErrorCode::kPrecondition,
                "composite matrix needs at least 2 languages present in both families '" +
                    std::string(family_a) + "' and '" + std::string(family_b) + "'");
  }
  const std::size_t k = languages.size();
  CorrelationMatrix m;
  m.labels = languages;
  m.semantics = DiagonalSemantics::kCrossFamily;
  m.values.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t ci = i > j ? cols_a[i] : cols_b[i];
      std::size_t cj = i > j ? cols_a[j] : cols_b[j];
      if (i == j) {
        ci = cols_a[i];
        cj = cols_b[i];
      }
      m.values[i * k + j] = Pearson(table.Column(ci), table.Column(cj));
    }
  }
  return m;
}

// --- variance ----------------------------------------------------------------

std::string_view VarianceGroupName(VarianceGroup group) {
  return group == VarianceGroup::kPositive ? "positive" : "negative";
}

FiveNumberSummary Summarize(std::vector<double> values) {
  FiveNumberSummary s;
  s.n = values.size();
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.min = s.q1 = s.median = s.q3 = s.max = nan;
    return s;
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  s.min = values.front();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = values.back();
  return s;
}

VarianceReport VarianceAnalysis(const ScoreTable& table) {
  if (table.columns() < 2) {
    throw Error(ErrorCode::kPrecondition, "variance analysis needs at least 2 columns");
  }
  VarianceReport report;
  std::vector<double> positive, negative;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    std::vector<double> row = table.Row(r);
    VarianceRow out;
    out.row_id = table.row_ids()[r];
    out.mean = SampleMean(row);
    out.variance = SampleVariance(row);
    if (out.mean < 0.0) {
      out.group = VarianceGroup::kNegative;
      negative.push_back(out.variance);
    } else {
      out.group = VarianceGroup::kPositive;
      out.zero_mean = out.mean == 0.0;
      if (out.zero_mean) ++report.zero_mean_rows;
      positive.push_back(out.variance);
    }
    report.rows.push_back(std::move(out));
  }
  report.positive = Summarize(std::move(positive));
  report.negative = Summarize(std::move(negative));
  return report;
}

}  // namespace moraldir
