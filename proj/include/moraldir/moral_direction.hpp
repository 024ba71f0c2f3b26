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

#include "moraldir/embedding_store.hpp"

namespace moraldir {

enum class Polarity { kPositive, kNegative };

std::string_view PolarityName(Polarity polarity);
std::optional<Polarity> PolarityFromName(std::string_view name);

struct InductionVerb {
  std::string verb_id;
  std::string surface;
  Polarity polarity = Polarity::kPositive;
};

// Question templates with exactly one "[verb]" slot each.
class PromptTemplateSet {
 public:
  static constexpr std::string_view kPlaceholder = "[verb]";

  // Throws Error(kValidation) if the list is empty or any template does not
  // contain the placeholder exactly once.
  PromptTemplateSet(std::vector<std::string> templates, std::string language);

  const std::vector<std::string>& templates() const { return templates_; }
  const std::string& language() const { return language_; }
  std::size_t size() const { return templates_.size(); }

 private:
  std::vector<std::string> templates_;
  std::string language_;
};

struct Prompt {
  std::string verb_id;
  std::size_t template_index = 0;
  std::string text;

  std::string id() const;
};

// "<verb_id>#<template_index>", the embedding id of one templated prompt.
std::string PromptId(std::string_view verb_id, std::size_t template_index);

// Verb-major expansion: for each verb, every template in order.
std::vector<Prompt> ExpandTemplates(std::span<const InductionVerb> verbs,
                                    const PromptTemplateSet& templates);

// Componentwise mean of the embeddings of "<verb_id>#0" .. "#template_count-1".
// Throws Error(kNotFound) listing every missing prompt id.
std::vector<double> AggregateVerbEmbedding(const EmbeddingSet& set, std::string_view verb_id,
                                           std::size_t template_count);

struct PcaResult {
  std::vector<double> mean;
  std::vector<double> component;  // unit norm, first nonzero entry positive
  double explained_variance_ratio = 0.0;
};

// First principal component from the thin SVD of the column-centered rows.
PcaResult PcaFirstComponent(std::span<const std::vector<double>> rows);

enum class OrientationRule { kPolarityMeans, kFirstNonzeroComponent };

std::string_view OrientationRuleName(OrientationRule rule);

// How the sign of the direction was fixed, with the evidence used.
struct Orientation {
  OrientationRule rule = OrientationRule::kPolarityMeans;
  double positive_mean = 0.0;  // mean raw projection of positive verbs, final sign
  double negative_mean = 0.0;
  bool flipped = false;  // relative to the canonical PCA sign
  bool warning = false;  // polarity means were equal
};

struct MoralDirectionModel {
  EmbeddingManifest source_manifest;
  std::vector<double> mean;
  std::vector<double> direction;
  double normalizer = 1.0;
  double explained_variance_ratio = 0.0;
  Orientation orientation;

  std::size_t dim() const { return mean.size(); }
};

// Runs PCA over the verb vectors (rows in verb_id order), orients the axis
// so positive verbs project above negative ones, and scales by the largest
// absolute induction-verb projection.
MoralDirectionModel Induce(const std::map<std::string, std::vector<double>>& verb_vectors,
                           const std::map<std::string, Polarity>& polarities,
                           EmbeddingManifest source_manifest = {});

struct ScoredStatement {
  std::string id;
  std::string text;
  double raw = 0.0;    // <embedding - mean, direction>
  double score = 0.0;  // raw / normalizer, never clamped
};

double RawProjection(const MoralDirectionModel& model, std::span<const double> embedding);

ScoredStatement Score(const MoralDirectionModel& model, std::span<const double> embedding,
                      std::string id = {}, std::string text = {});

// One result per id in input order; all set ids in file order when `ids` is
// not given.
std::vector<ScoredStatement> ScoreBatch(const MoralDirectionModel& model, const EmbeddingSet& set,
                                        std::optional<std::span<const std::string>> ids = {});

struct VerbScore {
  std::string verb_id;
  Polarity polarity = Polarity::kPositive;
  double raw = 0.0;
  double score = 0.0;
};

struct InductionResult {
  MoralDirectionModel model;
  std::vector<VerbScore> verbs;  // in verb_id order
  std::size_t template_count = 0;
};

// Aggregates every verb's templated prompts from `set`, induces the model and
// scores the induction verbs with it.
InductionResult InduceFromEmbeddings(const EmbeddingSet& set, std::span<const InductionVerb> verbs,
                                     const PromptTemplateSet& templates);

// Model document (JSON), shortest round-trip decimals.
std::string SerializeModel(const MoralDirectionModel& model);
MoralDirectionModel ParseModel(std::string_view text, std::string_view source);
MoralDirectionModel LoadModel(const std::filesystem::path& path);

// Verbs file: CSV with header verb_id,surface,polarity.
std::vector<InductionVerb> ParseInductionVerbs(std::string_view text, std::string_view source);
std::vector<InductionVerb> LoadInductionVerbs(const std::filesystem::path& path);

// Templates file: JSON {"language": ..., "templates": [...]}.
PromptTemplateSet ParseTemplateSet(std::string_view text, std::string_view source);
PromptTemplateSet LoadTemplateSet(const std::filesystem::path& path);

}  // namespace moraldir
