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

#include "moraldir/moral_direction.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>

#include "json_util.hpp"
#include "moraldir/error.hpp"
#include "moraldir/text_io.hpp"

namespace moraldir {

using detail::Json;
using detail::OrderedJson;

std::string_view PolarityName(Polarity polarity) {
  return polarity == Polarity::kPositive ? "positive" : "negative";
}

std::optional<Polarity> PolarityFromName(std::string_view name) {
  if (name == "positive") return Polarity::kPositive;
  if (name == "negative") return Polarity::kNegative;
  return std::nullopt;
}

std::string_view OrientationRuleName(OrientationRule rule) {
  return rule == OrientationRule::kPolarityMeans ? "polarity_means" : "first_nonzero_component";
}

namespace {

std::size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

// Flips v so that its first nonzero entry is positive.
void CanonicalizeSign(std::vector<double>& v) {
  for (double x : v) {
    if (x == 0.0) continue;
    if (x < 0.0) {
      for (double& y : v) y = -y;
    }
    return;
  }
}

}  // namespace

PromptTemplateSet::PromptTemplateSet(std::vector<std::string> templates, std::string language)
    : templates_(std::move(templates)), language_(std::move(language)) {
  if (templates_.empty()) {
    throw Error(ErrorCode::kValidation, "template set must contain at least one template");
  }
  for (std::size_t i = 0; i < templates_.size(); ++i) {
    std::size_t count = CountOccurrences(templates_[i], kPlaceholder);
    if (count != 1) {
      throw Error(ErrorCode::kValidation,
                  "template " + std::to_string(i) + " must contain the placeholder " +
                      std::string(kPlaceholder) + " exactly once (found " +
                      std::to_string(count) + "): '" + templates_[i] + "'");
    }
  }
}

std::string PromptId(std::string_view verb_id, std::size_t template_index) {
  return std::string(verb_id) + "#" + std::to_string(template_index);
}

std::string Prompt::id() const { return PromptId(verb_id, template_index); }

std::vector<Prompt> ExpandTemplates(std::span<const InductionVerb> verbs,
                                    const PromptTemplateSet& templates) {
  std::vector<Prompt> prompts;
  prompts.reserve(verbs.size() * templates.size());
  for (const auto& verb : verbs) {
    for (std::size_t t = 0; t < templates.size(); ++t) {
      std::string text = templates.templates()[t];
      text.replace(text.find(PromptTemplateSet::kPlaceholder),
                   PromptTemplateSet::kPlaceholder.size(), verb.surface);
      prompts.push_back(Prompt{verb.verb_id, t, std::move(text)});
    }
  }
  return prompts;
}

std::vector<double> AggregateVerbEmbedding(const EmbeddingSet& set, std::string_view verb_id,
                                           std::size_t template_count) {
  if (template_count == 0) {
    throw Error(ErrorCode::kPrecondition, "template_count must be >= 1");
  }
  std::vector<std::string> missing;
  std::vector<const EmbeddingRecord*> found;
  for (std::size_t t = 0; t < template_count; ++t) {
    std::string id = PromptId(verb_id, t);
    const EmbeddingRecord* record = set.Find(id);
    if (record == nullptr) {
      missing.push_back(std::move(id));
    } else {
      found.push_back(record);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::kNotFound, "missing prompt embeddings: " + list);
  }
  std::vector<double> mean(set.dim(), 0.0);
  for (const auto* record : found) {
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += record->vector[j];
  }
  for (double& x : mean) x /= static_cast<double>(template_count);
  return mean;
}

PcaResult PcaFirstComponent(std::span<const std::vector<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < 2) {
    throw Error(ErrorCode::kPrecondition, "PCA needs at least 2 rows, got " + std::to_string(n));
  }
  const auto dim = static_cast<Eigen::Index>(rows.front().size());
  if (dim < 1) throw Error(ErrorCode::kPrecondition, "PCA rows must be non-empty");
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "PCA rows differ in dimension: " + std::to_string(dim) + " vs " +
                      std::to_string(row.size()));
    }
  }

  PcaResult result;
  result.mean.assign(static_cast<std::size_t>(dim), 0.0);
  for (const auto& row : rows) {
    for (Eigen::Index j = 0; j < dim; ++j) result.mean[j] += row[j];
  }
  for (double& x : result.mean) x /= static_cast<double>(n);

  Eigen::MatrixXd centered(n, dim);
  bool any_spread = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      centered(i, j) = rows[i][j] - result.mean[j];
      if (rows[i][j] != rows[0][j]) any_spread = true;
    }
  }
  if (!any_spread) {
    throw Error(ErrorCode::kDegenerate, "all PCA rows are identical (zero variance)");
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double top = sv(0) * sv(0);
  double total = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) total += sv(i) * sv(i);
  if (!(top > 0.0)) {
    throw Error(ErrorCode::kDegenerate, "centered data has zero variance");
  }

  Eigen::VectorXd v = svd.matrixV().col(0);
  v /= v.norm();
  result.component.assign(v.data(), v.data() + v.size());
  CanonicalizeSign(result.component);
  result.explained_variance_ratio = std::clamp(top / total, 0.0, 1.0);
  return result;
}

double RawProjection(const MoralDirectionModel& model, std::span<const double> embedding) {
  if (embedding.size() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding has dimension " + std::to_string(embedding.size()) +
                    " but the model has dimension " + std::to_string(model.dim()));
  }
  double raw = 0.0;
  for (std::size_t j = 0; j < embedding.size(); ++j) {
    raw += (embedding[j] - model.mean[j]) * model.direction[j];
  }
  return raw;
}

ScoredStatement Score(const MoralDirectionModel& model, std::span<const double> embedding,
                      std::string id, std::string text) {
  ScoredStatement out;
  out.id = std::move(id);
  out.text = std::move(text);
  out.raw = RawProjection(model, embedding);
  out.score = out.raw / model.normalizer;
  return out;
}

std::vector<ScoredStatement> ScoreBatch(const MoralDirectionModel& model, const EmbeddingSet& set,
                                        std::optional<std::span<const std::string>> ids) {
  if (set.dim() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding set has dimension " + std::to_string(set.dim()) +
                    " but the model has dimension " + std::to_string(model.dim()));
  }
  std::vector<ScoredStatement> out;
  if (!ids) {
    out.reserve(set.size());
    for (const auto& record : set.records()) {
      out.push_back(Score(model, record.vector, record.id, record.text));
    }
    return out;
  }
  std::vector<std::string> missing;
  for (const auto& id : *ids) {
    if (!set.Contains(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::kNotFound, "embedding ids not found: " + list);
  }
  out.reserve(ids->size());
  for (const auto& id : *ids) {
    const auto& record = set.Record(id);
    out.push_back(Score(model, record.vector, record.id, record.text));
  }
  return out;
}

MoralDirectionModel Induce(const std::map<std::string, std::vector<double>>& verb_vectors,
                           const std::map<std::string, Polarity>& polarities,
                           EmbeddingManifest source_manifest) {
  if (verb_vectors.size() < 2) {
    throw Error(ErrorCode::kPrecondition, "induction needs at least 2 verbs");
  }
  std::vector<std::vector<double>> rows;
  std::vector<Polarity> row_polarity;
  std::size_t n_positive = 0;
  for (const auto& [verb_id, vector] : verb_vectors) {
    auto it = polarities.find(verb_id);
    if (it == polarities.end()) {
      throw Error(ErrorCode::kPrecondition, "no polarity for induction verb '" + verb_id + "'");
    }
    rows.push_back(vector);
    row_polarity.push_back(it->second);
    if (it->second == Polarity::kPositive) ++n_positive;
  }
  const std::size_t n_negative = rows.size() - n_positive;
  if (n_positive == 0 || n_negative == 0) {
    throw Error(ErrorCode::kPrecondition,
                "induction needs both positive and negative verbs (got " +
                    std::to_string(n_positive) + " positive, " + std::to_string(n_negative) +
                    " negative)");
  }
  if (source_manifest.dim != 0 && source_manifest.dim != rows.front().size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "verb vectors have dimension " + std::to_string(rows.front().size()) +
                    " but the source manifest says " + std::to_string(source_manifest.dim));
  }

  PcaResult pca = PcaFirstComponent(rows);

  MoralDirectionModel model;
  model.source_manifest = std::move(source_manifest);
  model.mean = std::move(pca.mean);
  model.direction = std::move(pca.component);
  model.explained_variance_ratio = pca.explained_variance_ratio;

  auto polarity_means = [&](double& positive, double& negative) {
    double pos_sum = 0.0, neg_sum = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double raw = RawProjection(model, rows[i]);
      (row_polarity[i] == Polarity::kPositive ? pos_sum : neg_sum) += raw;
    }
    positive = pos_sum / static_cast<double>(n_positive);
    negative = neg_sum / static_cast<double>(n_negative);
  };

  Orientation& orientation = model.orientation;
  polarity_means(orientation.positive_mean, orientation.negative_mean);
  if (orientation.positive_mean < orientation.negative_mean) {
    for (double& x : model.direction) x = -x;
    orientation.flipped = true;
    polarity_means(orientation.positive_mean, orientation.negative_mean);
  } else if (orientation.positive_mean == orientation.negative_mean) {
    // PCA output already has its first nonzero component positive.
    orientation.rule = OrientationRule::kFirstNonzeroComponent;
    orientation.warning = true;
  }

  double max_abs = 0.0;
  for (const auto& row : rows) max_abs = std::max(max_abs, std::abs(RawProjection(model, row)));
  if (!(max_abs > 0.0)) {
    throw Error(ErrorCode::kDegenerate, "all induction verbs project to 0 on the direction");
  }
  model.normalizer = max_abs;
  return model;
}

InductionResult InduceFromEmbeddings(const EmbeddingSet& set, std::span<const InductionVerb> verbs,
                                     const PromptTemplateSet& templates) {
  std::map<std::string, std::vector<double>> vectors;
  std::map<std::string, Polarity> polarities;
  std::vector<std::string> missing;
  for (const auto& verb : verbs) {
    if (polarities.count(verb.verb_id)) {
      throw Error(ErrorCode::kValidation, "duplicate induction verb '" + verb.verb_id + "'");
    }
    polarities[verb.verb_id] = verb.polarity;
    for (std::size_t t = 0; t < templates.size(); ++t) {
      std::string id = PromptId(verb.verb_id, t);
      if (!set.Contains(id)) missing.push_back(std::move(id));
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::kNotFound, "missing prompt embeddings: " + list);
  }
  for (const auto& verb : verbs) {
    vectors[verb.verb_id] = AggregateVerbEmbedding(set, verb.verb_id, templates.size());
  }

  InductionResult result;
  result.template_count = templates.size();
  result.model = Induce(vectors, polarities, set.manifest());
  for (const auto& [verb_id, vector] : vectors) {
    ScoredStatement s = Score(result.model, vector, verb_id);
    result.verbs.push_back(VerbScore{verb_id, polarities.at(verb_id), s.raw, s.score});
  }
  return result;
}

// --- serialization -------------------------------------------------------

namespace {

constexpr std::string_view kModelKind = "moral_direction_model";

OrderedJson ManifestToJson(const EmbeddingManifest& m) {
  OrderedJson j;
  j["format_version"] = m.format_version;
  j["model_id"] = m.model_id;
  j["language"] = m.language;
  j["dim"] = m.dim;
  j["pooling"] = PoolingName(m.pooling);
  j["count"] = m.count;
  return j;
}

std::vector<double> RequireVector(const Json& object, const char* key, std::size_t dim,
                                  const std::string& context) {
  const Json& value = detail::RequireField(object, key, context);
  if (!value.is_array()) {
    throw Error(ErrorCode::kParse, std::string("field '") + key + "' must be an array", context);
  }
  std::vector<double> out;
  for (const Json& x : value) {
    double d = detail::AsDouble(x, std::string(key) + " component", context);
    if (!std::isfinite(d)) {
      throw Error(ErrorCode::kValidation, std::string(key) + " has a non-finite component",
                  context);
    }
    out.push_back(d);
  }
  if (out.size() != dim) {
    throw Error(ErrorCode::kValidation,
                std::string(key) + " has " + std::to_string(out.size()) +
                    " components, model dim is " + std::to_string(dim),
                context);
  }
  return out;
}

}  // namespace

std::string SerializeModel(const MoralDirectionModel& model) {
  OrderedJson j;
  j["format_version"] = 1;
  j["kind"] = kModelKind;
  j["source_manifest"] = ManifestToJson(model.source_manifest);
  j["dim"] = model.dim();
  j["normalizer"] = model.normalizer;
  j["explained_variance_ratio"] = model.explained_variance_ratio;
  OrderedJson o;
  o["rule"] = OrientationRuleName(model.orientation.rule);
  o["positive_mean"] = model.orientation.positive_mean;
  o["negative_mean"] = model.orientation.negative_mean;
  o["flipped"] = model.orientation.flipped;
  o["warning"] = model.orientation.warning;
  j["orientation"] = o;
  j["mean"] = model.mean;
  j["direction"] = model.direction;
  return j.dump(2) + "\n";
}

MoralDirectionModel ParseModel(std::string_view text, std::string_view source) {
  const std::string context(source);
  Json j = detail::ParseJson(text, context);
  if (detail::RequireString(j, "kind", context) != kModelKind) {
    throw Error(ErrorCode::kValidation, "not a moral direction model document", context);
  }
  if (detail::RequireInteger(j, "format_version", context) != 1) {
    throw Error(ErrorCode::kValidation, "unsupported model format_version", context);
  }
  MoralDirectionModel model;
  const Json& m = detail::RequireField(j, "source_manifest", context);
  model.source_manifest.format_version =
      static_cast<int>(detail::RequireInteger(m, "format_version", context));
  model.source_manifest.model_id = detail::RequireString(m, "model_id", context);
  model.source_manifest.language = detail::RequireString(m, "language", context);
  model.source_manifest.dim = static_cast<std::size_t>(detail::RequireInteger(m, "dim", context));
  auto pooling = PoolingFromName(detail::RequireString(m, "pooling", context));
  if (!pooling) throw Error(ErrorCode::kValidation, "invalid pooling in source_manifest", context);
  model.source_manifest.pooling = *pooling;
  model.source_manifest.count =
      static_cast<std::size_t>(detail::RequireInteger(m, "count", context));

  long long dim = detail::RequireInteger(j, "dim", context);
  if (dim < 1) throw Error(ErrorCode::kValidation, "model dim must be >= 1", context);
  model.mean = RequireVector(j, "mean", static_cast<std::size_t>(dim), context);
  model.direction = RequireVector(j, "direction", static_cast<std::size_t>(dim), context);
  model.normalizer = detail::RequireDouble(j, "normalizer", context);
  model.explained_variance_ratio = detail::RequireDouble(j, "explained_variance_ratio", context);

  const Json& o = detail::RequireField(j, "orientation", context);
  std::string rule = detail::RequireString(o, "rule", context);
  if (rule == OrientationRuleName(OrientationRule::kPolarityMeans)) {
    model.orientation.rule = OrientationRule::kPolarityMeans;
  } else if (rule == OrientationRuleName(OrientationRule::kFirstNonzeroComponent)) {
    model.orientation.rule = OrientationRule::kFirstNonzeroComponent;
  } else {
    throw Error(ErrorCode::kValidation, "unknown orientation rule '" + rule + "'", context);
  }
  model.orientation.positive_mean = detail::RequireDouble(o, "positive_mean", context);
  model.orientation.negative_mean = detail::RequireDouble(o, "negative_mean", context);
  const Json& flipped = detail::RequireField(o, "flipped", context);
  const Json& warning = detail::RequireField(o, "warning", context);
  if (!flipped.is_boolean() || !warning.is_boolean()) {
    throw Error(ErrorCode::kParse, "orientation flags must be booleans", context);
  }
  model.orientation.flipped = flipped.get<bool>();
  model.orientation.warning = warning.get<bool>();

  if (!(std::isfinite(model.normalizer) && model.normalizer > 0.0)) {
    throw Error(ErrorCode::kValidation, "normalizer must be a positive finite number", context);
  }
  if (!(model.explained_variance_ratio >= 0.0 && model.explained_variance_ratio <= 1.0)) {
    throw Error(ErrorCode::kValidation, "explained_variance_ratio must lie in [0, 1]", context);
  }
  double norm_sq = 0.0;
  for (double x : model.direction) norm_sq += x * x;
  if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-9) {
    throw Error(ErrorCode::kValidation, "direction is not unit norm", context);
  }
  return model;
}

MoralDirectionModel LoadModel(const std::filesystem::path& path) {
  return ParseModel(ReadFileToString(path), path.string());
}

std::vector<InductionVerb> ParseInductionVerbs(std::string_view text, std::string_view source) {
  auto rows = ParseCsv(text, source);
  const std::string src(source);
  if (rows.empty()) throw Error(ErrorCode::kParse, "empty verbs file", src);
  const auto& header = rows.front().fields;
  if (header != std::vector<std::string>{"verb_id", "surface", "polarity"}) {
    throw Error(ErrorCode::kParse, "verbs header must be verb_id,surface,polarity", src + ":1");
  }
  std::vector<InductionVerb> verbs;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string context = src + ":" + std::to_string(row.line);
    if (row.fields.size() != 3) {
      throw Error(ErrorCode::kParse, "expected 3 fields, got " + std::to_string(row.fields.size()),
                  context);
    }
    auto polarity = PolarityFromName(row.fields[2]);
    if (!polarity) {
      throw Error(ErrorCode::kValidation,
                  "polarity must be 'positive' or 'negative', got '" + row.fields[2] + "'",
                  context);
    }
    if (row.fields[0].empty() || row.fields[1].empty()) {
      throw Error(ErrorCode::kValidation, "verb_id and surface must be non-empty", context);
    }
    if (!seen.insert(row.fields[0]).second) {
      throw Error(ErrorCode::kValidation, "duplicate verb_id '" + row.fields[0] + "'", context);
    }
    verbs.push_back(InductionVerb{row.fields[0], row.fields[1], *polarity});
  }
  return verbs;
}

std::vector<InductionVerb> LoadInductionVerbs(const std::filesystem::path& path) {
  return ParseInductionVerbs(ReadFileToString(path), path.string());
}

PromptTemplateSet ParseTemplateSet(std::string_view text, std::string_view source) {
  const std::string context(source);
  Json j = detail::ParseJson(text, context);
  std::string language = detail::RequireString(j, "language", context);
  const Json& list = detail::RequireField(j, "templates", context);
  if (!list.is_array()) throw Error(ErrorCode::kParse, "'templates' must be an array", context);
  std::vector<std::string> templates;
  for (const Json& t : list) {
    if (!t.is_string()) throw Error(ErrorCode::kParse, "templates must be strings", context);
    templates.push_back(t.get<std::string>());
  }
  try {
    return PromptTemplateSet(std::move(templates), std::move(language));
  } catch (const Error& e) {
    throw e.WithContext(context);
  }
}

PromptTemplateSet LoadTemplateSet(const std::filesystem::path& path) {
  return ParseTemplateSet(ReadFileToString(path), path.string());
}

}  // namespace moraldir
