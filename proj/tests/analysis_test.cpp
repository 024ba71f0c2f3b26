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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "moraldir/error.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace moraldir {
namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kInternal;
}

TEST(PearsonTest, SmallExamples) {
  std::vector<double> x{1, 2, 3};
  EXPECT_EQ(Pearson(x, std::vector<double>{2, 4, 6}), 1.0);
  EXPECT_EQ(Pearson(x, std::vector<double>{3, 2, 1}), -1.0);
  EXPECT_NEAR(Pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}), 0.8,
              1e-12);
}

TEST(PearsonTest, MatchesDirectFormula) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 60;
    auto x = testing::RandomVector(rng, n, 5.0);
    auto y = testing::RandomVector(rng, n, 0.01);
    for (std::size_t i = 0; i < n; ++i) y[i] += 0.3 * x[i];
    EXPECT_NEAR(Pearson(x, y), oracle::DirectPearson(x, y), 1e-12);
  }
}

TEST(PearsonTest, SelfSymmetryAndAffineInvariance) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> coef(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = testing::RandomVector(rng, 30);
    auto y = testing::RandomVector(rng, 30);
    EXPECT_EQ(Pearson(x, x), 1.0);
    EXPECT_EQ(Pearson(x, y), Pearson(y, x));
    const double a = coef(rng), b = coef(rng) - 5.0, c = coef(rng), d = coef(rng) - 5.0;
    std::vector<double> xa(x), yc(y), yneg(y);
    for (std::size_t i = 0; i < 30; ++i) {
      xa[i] = a * x[i] + b;
      yc[i] = c * y[i] + d;
      yneg[i] = -c * y[i] + d;
    }
    const double r = Pearson(x, y);
    EXPECT_NEAR(Pearson(xa, yc), r, 1e-12);
    EXPECT_NEAR(Pearson(xa, yneg), -r, 1e-12);
    EXPECT_LE(std::abs(r), 1.0);
  }
}

TEST(PearsonTest, Errors) {
  std::vector<double> x{1, 2, 3};
  EXPECT_EQ(CodeOf([&] { Pearson(x, std::vector<double>{1, 2}); }), ErrorCode::kPrecondition);
  EXPECT_EQ(CodeOf([&] { Pearson(std::vector<double>{1}, std::vector<double>{1}); }),
            ErrorCode::kInsufficientData);
  EXPECT_EQ(CodeOf([&] { Pearson(x, std::vector<double>{4, 4, 4}); }),
            ErrorCode::kInsufficientVariance);
}

TEST(ScoreTableTest, ParseWithPolarity) {
  auto t = ScoreTable::Parse(
      "row_id,polarity,m1/en,m1/de\nsmile,positive,0.5,0.25\nkill,negative,-1,-0.75\n", "t.csv");
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.column_ids(), (std::vector<std::string>{"m1/en", "m1/de"}));
  EXPECT_EQ(t.at(1, 1), -0.75);
  ASSERT_EQ(t.polarities().size(), 2u);
  EXPECT_EQ(t.polarities()[1], Polarity::kNegative);
  EXPECT_EQ(*t.ColumnIndex("m1/de"), 1u);
  EXPECT_FALSE(t.ColumnIndex("nope").has_value());
}

TEST(ScoreTableTest, ParseErrors) {
  EXPECT_EQ(CodeOf([] { ScoreTable::Parse("", "t"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ScoreTable::Parse("id,a\nx,1\n", "t"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ScoreTable::Parse("row_id,a\nx,1,2\n", "t"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ScoreTable::Parse("row_id,a\nx,abc\n", "t"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ScoreTable::Parse("row_id,a\nx,nan\n", "t"); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { ScoreTable::Parse("row_id,a\nx,1\nx,2\n", "t"); }),
            ErrorCode::kValidation);
  try {
    ScoreTable::Parse("row_id,a\nx,1\ny,oops\n", "t.csv");
  } catch (const Error& e) {
    EXPECT_EQ(e.context(), "t.csv:3");
  }
}

TEST(ScoreTableTest, JoinIsInnerAndKeepsFirstOrder) {
  ScoreTable a({"r1", "r2", "r3"}, {"m/en"}, {1, 2, 3});
  ScoreTable b({"r3", "r1", "r9"}, {"m/de"}, {30, 10, 90});
  std::vector<ScoreTable> both{a, b};
  auto j = ScoreTable::Join(both);
  EXPECT_EQ(j.row_ids(), (std::vector<std::string>{"r1", "r3"}));
  EXPECT_EQ(j.Row(1), (std::vector<double>{3, 30}));
  std::vector<ScoreTable> clash{a, a};
  EXPECT_EQ(CodeOf([&] { ScoreTable::Join(clash); }), ErrorCode::kValidation);
}

TEST(ScoreTableTest, CsvRoundTripAtDisplayPrecision) {
  ScoreTable t({"a", "b"}, {"x", "y"}, {0.5, -0.25, 1.0, 2.0});
  auto back = ScoreTable::Parse(t.ToCsv(), "mem");
  EXPECT_EQ(back.row_ids(), t.row_ids());
  EXPECT_EQ(back.Column(0), t.Column(0));
}

TEST(ReferenceTest, CorrelationOverSharedRows) {
  ScoreTable t({"a", "b", "c", "d"}, {"m/en"}, {1, 2, 3, 4});
  std::map<std::string, double> ref{{"a", 2}, {"b", 4}, {"c", 6}, {"zzz", 100}};
  auto rc = CorrelationWithReference(t, "m/en", ref);
  EXPECT_EQ(rc.n_shared, 3u);
  EXPECT_NEAR(rc.r, 1.0, 1e-15);
  std::map<std::string, double> tiny{{"a", 1}};
  EXPECT_EQ(CodeOf([&] { CorrelationWithReference(t, "m/en", tiny); }),
            ErrorCode::kInsufficientData);
  EXPECT_EQ(CodeOf([&] { CorrelationWithReference(t, "m/fr", ref); }), ErrorCode::kNotFound);
}

TEST(ReferenceTest, ParseFile) {
  auto ref = ParseReference("row_id,value\na,0.5\nb,-1\n", "r.csv");
  EXPECT_EQ(ref.at("b"), -1.0);
  EXPECT_EQ(CodeOf([] { ParseReference("id,score\n", "r"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseReference("row_id,value\na,1\na,2\n", "r"); }),
            ErrorCode::kValidation);
}

TEST(CorrelationMatrixTest, SymmetricWithUnitDiagonal) {
  std::mt19937_64 rng(21);
  std::vector<double> cells;
  for (int i = 0; i < 40 * 4; ++i) cells.push_back(testing::RandomVector(rng, 1)[0]);
  std::vector<std::string> rows;
  for (int i = 0; i < 40; ++i) rows.push_back("r" + std::to_string(i));
  ScoreTable t(rows, {"a/en", "a/de", "b/en", "b/de"}, cells);
  auto m = ComputeCorrelationMatrix(t);
  ASSERT_EQ(m.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(m.at(i, i), 1.0);
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_EQ(m.at(i, j), m.at(j, i));
      EXPECT_NEAR(m.at(i, j), oracle::DirectPearson(t.Column(i), t.Column(j)), 1e-12);
    }
  }
}

TEST(CorrelationMatrixTest, CompositeLayout) {
  std::mt19937_64 rng(22);
  std::vector<std::string> rows;
  std::vector<double> cells;
  for (int i = 0; i < 25; ++i) {
    rows.push_back("r" + std::to_string(i));
    for (int c = 0; c < 6; ++c) cells.push_back(testing::RandomVector(rng, 1)[0]);
  }
  ScoreTable t(rows, {"A/en", "A/de", "A/fr", "B/en", "B/de", "B/xx"}, cells);
  auto m = ComputeCompositeMatrix(t, "A", "B");
  EXPECT_EQ(m.labels, (std::vector<std::string>{"en", "de"}));
  EXPECT_EQ(m.semantics, DiagonalSemantics::kCrossFamily);
  auto col = [&](const char* id) { return t.Column(*t.ColumnIndex(id)); };
  EXPECT_NEAR(m.at(1, 0), oracle::DirectPearson(col("A/de"), col("A/en")), 1e-12);
  EXPECT_NEAR(m.at(0, 1), oracle::DirectPearson(col("B/en"), col("B/de")), 1e-12);
  EXPECT_NEAR(m.at(0, 0), oracle::DirectPearson(col("A/en"), col("B/en")), 1e-12);
  EXPECT_NEAR(m.at(1, 1), oracle::DirectPearson(col("A/de"), col("B/de")), 1e-12);
  EXPECT_EQ(CodeOf([&] { ComputeCompositeMatrix(t, "A", "C"); }), ErrorCode::kPrecondition);
}

TEST(SummarizeTest, LinearInterpolation) {
  auto s = Summarize({4, 1, 3, 2});
  EXPECT_EQ(s.n, 4u);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.q1, 1.75);
  EXPECT_EQ(s.median, 2.5);
  EXPECT_EQ(s.q3, 3.25);
  EXPECT_EQ(s.max, 4.0);
  EXPECT_TRUE(std::isnan(Summarize({}).median));
  EXPECT_EQ(Summarize({7}).q1, 7.0);
}

TEST(VarianceTest, HandComputedRows) {
  ScoreTable t({"up", "down", "flat"}, {"a", "b", "c"}, {1, 2, 3, -1, -3, -5, 1, 0, -1});
  auto report = VarianceAnalysis(t);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[0].mean, 2.0);
  EXPECT_EQ(report.rows[0].variance, 1.0);
  EXPECT_EQ(report.rows[1].group, VarianceGroup::kNegative);
  EXPECT_EQ(report.rows[1].variance, 4.0);
  EXPECT_TRUE(report.rows[2].zero_mean);
  EXPECT_EQ(report.rows[2].group, VarianceGroup::kPositive);
  EXPECT_EQ(report.zero_mean_rows, 1u);
  EXPECT_EQ(report.positive.n, 2u);
  EXPECT_EQ(report.negative.n, 1u);
}

TEST(VarianceTest, PartitionAndTranslationInvariance) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 5 + rng() % 60, cols = 2 + rng() % 8;
    std::vector<std::string> ids, columns;
    for (std::size_t c = 0; c < cols; ++c) columns.push_back("c" + std::to_string(c));
    std::vector<double> cells, shifted;
    for (std::size_t r = 0; r < rows; ++r) {
      ids.push_back("r" + std::to_string(r));
      const double shift = testing::RandomVector(rng, 1, 10.0)[0];
      for (double x : testing::RandomVector(rng, cols)) {
        cells.push_back(x);
        shifted.push_back(x + shift);
      }
    }
    ScoreTable table(ids, columns, cells);
    auto a = VarianceAnalysis(table);
    auto b = VarianceAnalysis(ScoreTable(ids, columns, shifted));
    EXPECT_EQ(a.positive.n + a.negative.n, rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& row = a.rows[r];
      EXPECT_EQ(row.group == VarianceGroup::kNegative, row.mean < 0.0);
      EXPECT_GE(row.variance, 0.0);
      EXPECT_NEAR(row.variance, b.rows[r].variance, 1e-12 * std::max(1.0, row.variance) + 1e-12);
      long double mean = 0.0L, ss = 0.0L;
      const auto values = table.Row(r);
      for (double x : values) mean += x;
      mean /= values.size();
      for (double x : values) ss += (x - mean) * (x - mean);
      EXPECT_NEAR(row.variance, static_cast<double>(ss / (values.size() - 1)), 1e-12);
    }
  }
}

}  // namespace
}  // namespace moraldir
