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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moraldir/embedding_store.hpp"
#include "moraldir/moral_direction.hpp"

namespace moraldir {

struct PairSide {
  std::string language;
  std::string text;
  std::string embed_id;
};

struct ParallelPair {
  std::string pair_id;
  PairSide a;
  PairSide b;
  std::optional<double> quality;  // ingested translation quality, higher is better
};

// Newline-delimited JSON records: pair_id, lang_a, text_a, embed_id_a,
// lang_b, text_b, embed_id_b and an optional numeric quality.
std::vector<ParallelPair> ParsePairs(std::string_view text, std::string_view source);
std::vector<ParallelPair> LoadPairs(const std::filesystem::path& path);

struct ScoredPair {
  std::string pair_id;
  std::string text_a;
  std::string text_b;
  double score_a = 0.0;
  double score_b = 0.0;
  double delta = 0.0;  // score_a - score_b
  double abs_delta = 0.0;
  std::optional<double> quality;
};

// Side a is scored with model_a over set_a, side b with model_b over set_b.
// Throws kNotFound listing every pair with an unresolvable embedding id.
std::vector<ScoredPair> ScorePairs(const MoralDirectionModel& model_a, const EmbeddingSet& set_a,
                                   const MoralDirectionModel& model_b, const EmbeddingSet& set_b,
                                   std::span<const ParallelPair> pairs);

// True when the pair survives a quality threshold (always when none is set).
bool PassesQuality(const ScoredPair& pair, std::optional<double> min_quality);

// Filters by quality, sorts by abs_delta descending then pair_id ascending,
// and keeps the first k.
std::vector<ScoredPair> RankDivergent(std::span<const ScoredPair> scored, std::size_t k,
                                      std::optional<double> min_quality = std::nullopt);

struct DeltaQualityCorrelation {
  double r_all = 0.0;
  std::optional<double> r_filtered;  // absent without threshold or with too few pairs
  std::size_t n_all = 0;
  std::size_t n_filtered = 0;
};

// Pearson r between signed delta and quality over pairs carrying quality.
DeltaQualityCorrelation ComputeDeltaQualityCorrelation(
    std::span<const ScoredPair> scored, std::optional<double> min_quality = std::nullopt);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

struct DeltaDistribution {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;            // sample (n-1)
  std::optional<double> skewness; // adjusted Fisher-Pearson; undefined when std is 0 or n < 3
  std::optional<double> excess_kurtosis;  // bias corrected; undefined when std is 0 or n < 4
  Histogram histogram;
};

DeltaDistribution ComputeDeltaDistribution(std::span<const ScoredPair> scored,
                                           std::size_t bins = 50);
DeltaDistribution DescribeSample(std::span<const double> values, std::size_t bins = 50);

struct DivergenceCounts {
  std::size_t total = 0;
  std::size_t filtered_out = 0;
  std::size_t missing_quality = 0;
};

struct DivergenceReport {
  std::vector<ScoredPair> ranked;
  DeltaDistribution distribution;
  std::optional<DeltaQualityCorrelation> correlation;  // absent with < 2 quality pairs
  std::optional<double> min_quality;
  DivergenceCounts counts;
};

DivergenceReport BuildDivergenceReport(std::span<const ScoredPair> scored, std::size_t k,
                                       std::optional<double> min_quality, std::size_t bins = 50);

}  // namespace moraldir
