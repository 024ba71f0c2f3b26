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

#include "moraldir/parallel_divergence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json_util.hpp"
#include "moraldir/analysis.hpp"
#include "moraldir/error.hpp"
#include "moraldir/text_io.hpp"

namespace moraldir {

using detail::Json;

std::vector<ParallelPair> ParsePairs(std::string_view text, std::string_view source) {
  const std::string src(source);
  std::vector<ParallelPair> pairs;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::string context = src + ":" + std::to_string(line_no);
    Json j = detail::ParseJson(line, context);
    ParallelPair pair;
    pair.pair_id = detail::RequireString(j, "pair_id", context);
    pair.a.language = detail::RequireString(j, "lang_a", context);
    pair.a.text = detail::RequireString(j, "text_a", context);
    pair.a.embed_id = detail::RequireString(j, "embed_id_a", context);
    pair.b.language = detail::RequireString(j, "lang_b", context);
    pair.b.text = detail::RequireString(j, "text_b", context);
    pair.b.embed_id = detail::RequireString(j, "embed_id_b", context);
    if (auto it = j.find("quality"); it != j.end() && !it->is_null()) {
      double q = detail::AsDouble(*it, "quality", context);
      if (!std::isfinite(q)) {
        throw Error(ErrorCode::kValidation, "quality must be finite", context);
      }
      pair.quality = q;
    }
    if (!seen.insert(pair.pair_id).second) {
      throw Error(ErrorCode::kValidation, "duplicate pair_id '" + pair.pair_id + "'", context);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<ParallelPair> LoadPairs(const std::filesystem::path& path) {
  return ParsePairs(ReadFileToString(path), path.string());
}

std::vector<ScoredPair> ScorePairs(const MoralDirectionModel& model_a, const EmbeddingSet& set_a,
                                   const MoralDirectionModel& model_b, const EmbeddingSet& set_b,
                                   std::span<const ParallelPair> pairs) {
  if (set_a.dim() != model_a.dim() || set_b.dim() != model_b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding/model dimensions differ: side a " + std::to_string(set_a.dim()) +
                    " vs " + std::to_string(model_a.dim()) + ", side b " +
                    std::to_string(set_b.dim()) + " vs " + std::to_string(model_b.dim()));
  }
  std::string missing;
  for (const auto& pair : pairs) {
    if (!set_a.Contains(pair.a.embed_id) || !set_b.Contains(pair.b.embed_id)) {
      missing += (missing.empty() ? "" : ", ") + pair.pair_id;
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kNotFound, "unresolvable embedding ids in pairs: " + missing);
  }
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    ScoredPair s;
    s.pair_id = pair.pair_id;
    s.text_a = pair.a.text;
    s.text_b = pair.b.text;
    s.score_a = Score(model_a, set_a.Lookup(pair.a.embed_id)).score;
    s.score_b = Score(model_b, set_b.Lookup(pair.b.embed_id)).score;
    s.delta = s.score_a - s.score_b;
    s.abs_delta = std::abs(s.delta);
    s.quality = pair.quality;
    out.push_back(std::move(s));
  }
  return out;
}

bool PassesQuality(const ScoredPair& pair, std::optional<double> min_quality) {
  if (!min_quality) return true;
  return pair.quality && *pair.quality >= *min_quality;
}

std::vector<ScoredPair> RankDivergent(std::span<const ScoredPair> scored, std::size_t k,
                                      std::optional<double> min_quality) {
  std::vector<ScoredPair> kept;
  for (const auto& pair : scored) {
    if (PassesQuality(pair, min_quality)) kept.push_back(pair);
  }
  std::sort(kept.begin(), kept.end(), [](const ScoredPair& x, const ScoredPair& y) {
    if (x.abs_delta != y.abs_delta) return x.abs_delta > y.abs_delta;
    return x.pair_id < y.pair_id;
  });
  if (kept.size() > k) kept.resize(k);
  return kept;
}

DeltaQualityCorrelation ComputeDeltaQualityCorrelation(std::span<const ScoredPair> scored,
                                                       std::optional<double> min_quality) {
  std::vector<double> delta, quality, delta_f, quality_f;
  for (const auto& pair : scored) {
    if (!pair.quality) continue;
    delta.push_back(pair.delta);
    quality.push_back(*pair.quality);
    if (PassesQuality(pair, min_quality)) {
      delta_f.push_back(pair.delta);
      quality_f.push_back(*pair.quality);
    }
  }
  if (delta.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "delta/quality correlation needs at least 2 pairs with quality, got " +
                    std::to_string(delta.size()));
  }
  DeltaQualityCorrelation out;
  out.n_all = delta.size();
  out.r_all = Pearson(delta, quality);
  if (min_quality) {
    out.n_filtered = delta_f.size();
    if (delta_f.size() >= 2) {
      try {
        out.r_filtered = Pearson(delta_f, quality_f);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kInsufficientVariance) throw;
      }
    }
  }
  return out;
}

DeltaDistribution DescribeSample(std::span<const double> values, std::size_t bins) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "distribution summary needs at least 2 values");
  }
  if (bins == 0) throw Error(ErrorCode::kPrecondition, "histogram needs at least 1 bin");
  DeltaDistribution d;
  d.n = values.size();
  const double n = static_cast<double>(d.n);
  d.mean = SampleMean(values);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double dv = v - d.mean;
    const double sq = dv * dv;
    m2 += sq;
    m3 += sq * dv;
    m4 += sq * sq;
  }
  d.stddev = std::sqrt(m2 / (n - 1.0));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    if (d.n >= 3) {
      const double g1 = m3 / std::pow(m2, 1.5);
      d.skewness = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
    }
    if (d.n >= 4) {
      const double g2 = m4 / (m2 * m2) - 3.0;
      d.excess_kurtosis = ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
    }
  }

  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  d.histogram.lo = lo;
  d.histogram.hi = hi;
  d.histogram.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::floor((v - lo) / width));
    d.histogram.counts[std::min(idx, bins - 1)]++;
  }
  return d;
}

DeltaDistribution ComputeDeltaDistribution(std::span<const ScoredPair> scored, std::size_t bins) {
  std::vector<double> deltas;
  deltas.reserve(scored.size());
  for (const auto& pair : scored) deltas.push_back(pair.delta);
  return DescribeSample(deltas, bins);
}

DivergenceReport BuildDivergenceReport(std::span<const ScoredPair> scored, std::size_t k,
                                       std::optional<double> min_quality, std::size_t bins) {
  DivergenceReport report;
  report.min_quality = min_quality;
  report.ranked = RankDivergent(scored, k, min_quality);
  report.distribution = ComputeDeltaDistribution(scored, bins);
  report.counts.total = scored.size();
  for (const auto& pair : scored) {
    if (!pair.quality) ++report.counts.missing_quality;
    if (!PassesQuality(pair, min_quality)) ++report.counts.filtered_out;
  }
  if (report.counts.total - report.counts.missing_quality >= 2) {
    try {
      report.correlation = ComputeDeltaQualityCorrelation(scored, min_quality);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientVariance) throw;
    }
  }
  return report;
}

}  // namespace moraldir
