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

#include "moraldir/questionnaire.hpp"

#include <array>
#include <cmath>
#include <set>

#include "json_util.hpp"
#include "moraldir/analysis.hpp"
#include "moraldir/error.hpp"
#include "moraldir/text_io.hpp"

namespace moraldir {

using detail::Json;

namespace {

constexpr std::array<Aspect, 5> kScoredAspects = {Aspect::kCare, Aspect::kFairness,
                                                  Aspect::kLoyalty, Aspect::kAuthority,
                                                  Aspect::kPurity};

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out;
}

}  // namespace

std::string_view AspectName(Aspect aspect) {
  switch (aspect) {
    case Aspect::kCare:
      return "care";
    case Aspect::kFairness:
      return "fairness";
    case Aspect::kLoyalty:
      return "loyalty";
    case Aspect::kAuthority:
      return "authority";
    case Aspect::kPurity:
      return "purity";
    case Aspect::kCatch:
      return "catch";
  }
  return "unknown";
}

std::optional<Aspect> AspectFromName(std::string_view name) {
  for (Aspect a : {Aspect::kCare, Aspect::kFairness, Aspect::kLoyalty, Aspect::kAuthority,
                   Aspect::kPurity, Aspect::kCatch}) {
    if (AspectName(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view CatchKindName(CatchKind kind) {
  switch (kind) {
    case CatchKind::kNone:
      return "none";
    case CatchKind::kNeutral:
      return "neutral";
    case CatchKind::kPolar:
      return "polar";
  }
  return "unknown";
}

std::string_view CatchVerdictName(CatchVerdict verdict) {
  return verdict == CatchVerdict::kPass ? "pass" : "flag";
}

void ValidateQuestionnaire(const QuestionnaireSpec& spec) {
  std::set<std::string> ids;
  bool any_scored = false;
  for (const auto& q : spec.questions) {
    if (q.question_id.empty()) {
      throw Error(ErrorCode::kValidation, "question id must be non-empty");
    }
    if (!ids.insert(q.question_id).second) {
      throw Error(ErrorCode::kValidation, "duplicate question id '" + q.question_id + "'");
    }
    if (q.multiplier != 1 && q.multiplier != -1) {
      throw Error(ErrorCode::kValidation, "question '" + q.question_id +
                                              "' has multiplier " + std::to_string(q.multiplier) +
                                              "; must be -1 or +1");
    }
    if (q.aspect == Aspect::kCatch && q.catch_kind == CatchKind::kNone) {
      throw Error(ErrorCode::kValidation,
                  "catch question '" + q.question_id + "' needs catch_kind neutral or polar");
    }
    if (q.aspect != Aspect::kCatch && q.catch_kind != CatchKind::kNone) {
      throw Error(ErrorCode::kValidation,
                  "question '" + q.question_id + "' has catch_kind but is not a catch question");
    }
    if (q.aspect != Aspect::kCatch) any_scored = true;
  }
  if (!any_scored) {
    throw Error(ErrorCode::kValidation, "questionnaire has no scored (non-catch) questions");
  }
}

QuestionnaireSpec ParseQuestionnaire(std::string_view text, std::string_view source) {
  const std::string src(source);
  Json j = detail::ParseJson(text, src);
  QuestionnaireSpec spec;
  spec.version = detail::RequireString(j, "version", src);
  const Json& questions = detail::RequireField(j, "questions", src);
  if (!questions.is_array()) throw Error(ErrorCode::kParse, "'questions' must be an array", src);
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const Json& q = questions[i];
    const std::string context = src + ": questions[" + std::to_string(i) + "]";
    MfqQuestion out;
    out.question_id = detail::RequireString(q, "id", context);
    std::string aspect = detail::RequireString(q, "aspect", context);
    auto parsed = AspectFromName(aspect);
    if (!parsed) {
      throw Error(ErrorCode::kValidation, "unknown aspect label '" + aspect + "'", context);
    }
    out.aspect = *parsed;
    out.multiplier = static_cast<int>(detail::RequireInteger(q, "multiplier", context));
    if (auto it = q.find("rephrased"); it != q.end()) {
      if (!it->is_boolean()) throw Error(ErrorCode::kParse, "'rephrased' must be boolean", context);
      out.rephrased = it->get<bool>();
    }
    if (auto kind = detail::OptionalString(q, "catch_kind", context)) {
      if (*kind == "neutral") {
        out.catch_kind = CatchKind::kNeutral;
      } else if (*kind == "polar") {
        out.catch_kind = CatchKind::kPolar;
      } else {
        throw Error(ErrorCode::kValidation, "unknown catch_kind '" + *kind + "'", context);
      }
    }
    const Json& texts = detail::RequireField(q, "text", context);
    if (!texts.is_object()) throw Error(ErrorCode::kParse, "'text' must be an object", context);
    for (auto it = texts.begin(); it != texts.end(); ++it) {
      if (!it.value().is_string()) {
        throw Error(ErrorCode::kParse, "text entries must be strings", context);
      }
      out.text[it.key()] = it.value().get<std::string>();
    }
    spec.questions.push_back(std::move(out));
  }
  try {
    ValidateQuestionnaire(spec);
  } catch (const Error& e) {
    throw e.WithContext(src);
  }
  return spec;
}

QuestionnaireSpec LoadQuestionnaire(const std::filesystem::path& path) {
  return ParseQuestionnaire(ReadFileToString(path), path.string());
}

CatchVerdict JudgeCatch(CatchKind kind, double score, const CatchThresholds& thresholds) {
  switch (kind) {
    case CatchKind::kNeutral:
      return std::abs(score) > thresholds.neutral_max_abs ? CatchVerdict::kFlag
                                                          : CatchVerdict::kPass;
    case CatchKind::kPolar:
      return score < thresholds.polar_min ? CatchVerdict::kFlag : CatchVerdict::kPass;
    case CatchKind::kNone:
      break;
  }
  throw Error(ErrorCode::kPrecondition, "not a catch question");
}

QuestionnaireResult AggregateQuestionnaire(const QuestionnaireSpec& spec,
                                           const std::map<std::string, double>& scores,
                                           const CatchThresholds& thresholds) {
  ValidateQuestionnaire(spec);
  std::vector<std::string> missing;
  for (const auto& q : spec.questions) {
    if (!scores.count(q.question_id)) missing.push_back(q.question_id);
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kNotFound, "no score for questions: " + JoinIds(missing));
  }

  QuestionnaireResult result;
  result.catches.thresholds = thresholds;
  std::map<Aspect, AspectResult> pooled;
  for (const auto& q : spec.questions) {
    const double raw = scores.at(q.question_id);
    const double signed_score = q.multiplier * raw;
    result.questions.push_back(
        QuestionScore{q.question_id, q.aspect, raw, q.multiplier, signed_score});
    if (q.aspect == Aspect::kCatch) {
      result.catches.entries.push_back(CatchEntry{q.question_id, q.catch_kind, signed_score,
                                                  JudgeCatch(q.catch_kind, signed_score,
                                                             thresholds)});
      continue;
    }
    AspectResult& aspect = pooled[q.aspect];
    aspect.aspect = q.aspect;
    aspect.signed_scores[q.question_id] = signed_score;
  }
  for (Aspect a : kScoredAspects) {
    auto it = pooled.find(a);
    if (it == pooled.end()) continue;
    AspectResult& aspect = it->second;
    // Summed in question_id order, so the result does not depend on spec order.
    double sum = 0.0;
    for (const auto& [id, s] : aspect.signed_scores) sum += s;
    aspect.n_questions = aspect.signed_scores.size();
    aspect.aspect_score = sum / static_cast<double>(aspect.n_questions);
    result.aspects.push_back(std::move(aspect));
  }
  return result;
}

QuestionnaireResult ScoreQuestionnaire(const MoralDirectionModel& model, const EmbeddingSet& set,
                                       const QuestionnaireSpec& spec, std::string_view language,
                                       const CatchThresholds& thresholds) {
  std::vector<std::string> no_text, no_embedding;
  for (const auto& q : spec.questions) {
    if (!q.text.count(std::string(language))) no_text.push_back(q.question_id);
    if (!set.Contains(q.question_id)) no_embedding.push_back(q.question_id);
  }
  if (!no_text.empty()) {
    throw Error(ErrorCode::kValidation, "questions without '" + std::string(language) +
                                            "' text: " + JoinIds(no_text));
  }
  if (!no_embedding.empty()) {
    throw Error(ErrorCode::kNotFound, "no embedding for questions: " + JoinIds(no_embedding));
  }
  std::map<std::string, double> scores;
  for (const auto& q : spec.questions) {
    scores[q.question_id] = Score(model, set.Lookup(q.question_id)).score;
  }
  return AggregateQuestionnaire(spec, scores, thresholds);
}

ComparisonReport CompareToReference(const std::vector<AspectResult>& results,
                                    const std::map<Aspect, double>& reference) {
  ComparisonReport report;
  std::vector<double> model, human;
  for (const auto& r : results) {
    auto it = reference.find(r.aspect);
    if (it == reference.end()) continue;
    report.aspects.push_back(
        AspectComparison{r.aspect, r.aspect_score, it->second, r.aspect_score - it->second});
    model.push_back(r.aspect_score);
    human.push_back(it->second);
  }
  if (report.aspects.empty()) {
    throw Error(ErrorCode::kInsufficientData, "no aspects shared between results and reference");
  }
  if (model.size() >= 2) {
    try {
      report.correlation = Pearson(model, human);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientVariance) throw;
    }
  }
  return report;
}

std::map<std::string, std::map<Aspect, double>> ParseAspectReference(std::string_view csv,
                                                                     std::string_view source) {
  const std::string src(source);
  auto rows = ParseCsv(csv, source);
  if (rows.empty() || rows.front().fields.size() < 2 || rows.front().fields[0] != "aspect") {
    throw Error(ErrorCode::kParse, "reference header must be aspect,<country>,...", src + ":1");
  }
  const auto& header = rows.front().fields;
  std::map<std::string, std::map<Aspect, double>> out;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (out.count(header[c])) {
      throw Error(ErrorCode::kValidation, "duplicate country column '" + header[c] + "'",
                  src + ":1");
    }
    out[header[c]];
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string context = src + ":" + std::to_string(rows[r].line);
    const auto& fields = rows[r].fields;
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParse, "expected " + std::to_string(header.size()) + " fields",
                  context);
    }
    auto aspect = AspectFromName(fields[0]);
    if (!aspect || *aspect == Aspect::kCatch) {
      throw Error(ErrorCode::kValidation, "unknown aspect label '" + fields[0] + "'", context);
    }
    for (std::size_t c = 1; c < header.size(); ++c) {
      if (fields[c].empty()) continue;  // country without data for this aspect
      double v = ParseDouble(fields[c], context);
      if (!std::isfinite(v)) throw Error(ErrorCode::kValidation, "non-finite value", context);
      if (!out[header[c]].emplace(*aspect, v).second) {
        throw Error(ErrorCode::kValidation, "duplicate aspect row '" + fields[0] + "'", context);
      }
    }
  }
  return out;
}

std::map<std::string, std::map<Aspect, double>> LoadAspectReference(
    const std::filesystem::path& path) {
  return ParseAspectReference(ReadFileToString(path), path.string());
}

}  // namespace moraldir
