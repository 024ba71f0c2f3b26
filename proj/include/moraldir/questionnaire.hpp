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
#include <string>
#include <string_view>
#include <vector>

#include "moraldir/embedding_store.hpp"
#include "moraldir/moral_direction.hpp"

namespace moraldir {

enum class Aspect { kCare, kFairness, kLoyalty, kAuthority, kPurity, kCatch };

std::string_view AspectName(Aspect aspect);
std::optional<Aspect> AspectFromName(std::string_view name);

// Catch questions come in two flavours: one with a morally neutral expected
// answer and one expected near the top of the scale.
enum class CatchKind { kNone, kNeutral, kPolar };

std::string_view CatchKindName(CatchKind kind);

struct MfqQuestion {
  std::string question_id;
  Aspect aspect = Aspect::kCare;
  std::map<std::string, std::string> text;  // language -> statement
  int multiplier = 1;                       // -1 for reverse-coded statements
  bool rephrased = false;
  CatchKind catch_kind = CatchKind::kNone;
};

struct QuestionnaireSpec {
  std::string version;
  std::vector<MfqQuestion> questions;
};

// Throws Error(kValidation) on duplicate ids, multipliers outside {-1, +1},
// catch questions without a catch kind, or a spec with no scored aspect.
void ValidateQuestionnaire(const QuestionnaireSpec& spec);

QuestionnaireSpec ParseQuestionnaire(std::string_view text, std::string_view source);
QuestionnaireSpec LoadQuestionnaire(const std::filesystem::path& path);

struct AspectResult {
  Aspect aspect = Aspect::kCare;
  std::map<std::string, double> signed_scores;  // question_id -> multiplier * score
  double aspect_score = 0.0;
  std::size_t n_questions = 0;
};

struct QuestionScore {
  std::string question_id;
  Aspect aspect = Aspect::kCare;
  double raw = 0.0;  // model score before the multiplier
  int multiplier = 1;
  double signed_score = 0.0;
};

struct CatchThresholds {
  double neutral_max_abs = 0.15;  // neutral catch flags when |score| exceeds this
  double polar_min = 0.25;        // polar catch flags when score is below this
};

enum class CatchVerdict { kPass, kFlag };

std::string_view CatchVerdictName(CatchVerdict verdict);

struct CatchEntry {
  std::string question_id;
  CatchKind kind = CatchKind::kNeutral;
  double score = 0.0;
  CatchVerdict verdict = CatchVerdict::kPass;
};

struct CatchReport {
  std::vector<CatchEntry> entries;
  CatchThresholds thresholds;
};

CatchVerdict JudgeCatch(CatchKind kind, double score, const CatchThresholds& thresholds);

struct QuestionnaireResult {
  std::vector<AspectResult> aspects;     // care, fairness, loyalty, authority, purity
  std::vector<QuestionScore> questions;  // spec order, catch questions included
  CatchReport catches;
};

// Pools already-computed model scores (question_id -> score). Throws
// kNotFound listing every question without a score.
QuestionnaireResult AggregateQuestionnaire(const QuestionnaireSpec& spec,
                                           const std::map<std::string, double>& scores,
                                           const CatchThresholds& thresholds = {});

// Scores each question's embedding (id = question_id) and pools per aspect.
// Every question needs a text entry for `language`.
QuestionnaireResult ScoreQuestionnaire(const MoralDirectionModel& model, const EmbeddingSet& set,
                                       const QuestionnaireSpec& spec, std::string_view language,
                                       const CatchThresholds& thresholds = {});

struct AspectComparison {
  Aspect aspect = Aspect::kCare;
  double model = 0.0;
  double human = 0.0;
  double difference = 0.0;  // model - human
};

struct ComparisonReport {
  std::vector<AspectComparison> aspects;
  std::optional<double> correlation;  // absent with < 2 shared aspects or no variance
};

ComparisonReport CompareToReference(const std::vector<AspectResult>& results,
                                    const std::map<Aspect, double>& reference);

// Reference table CSV: header "aspect,<country>,..."; one row per aspect.
std::map<std::string, std::map<Aspect, double>> ParseAspectReference(std::string_view csv,
                                                                     std::string_view source);
std::map<std::string, std::map<Aspect, double>> LoadAspectReference(
    const std::filesystem::path& path);

}  // namespace moraldir
