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

#include "moraldir/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "json_util.hpp"
#include "moraldir/analysis.hpp"
#include "moraldir/embedding_store.hpp"
#include "moraldir/error.hpp"
#include "moraldir/moral_direction.hpp"
#include "moraldir/parallel_divergence.hpp"
#include "moraldir/text_io.hpp"

namespace moraldir {

using detail::OrderedJson;

namespace {

double ParseOptionDouble(std::string_view key, std::string_view value) {
  try {
    return ParseDouble(value, "--" + std::string(key));
  } catch (const Error& e) {
    throw Error(ErrorCode::kUsage, e.what(), e.context());
  }
}

std::size_t ParseOptionCount(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kUsage, "--" + std::string(key) + " expects a non-negative integer, got '" +
                                       std::string(value) + "'");
  }
  return out;
}

void Require(const std::filesystem::path& path, std::string_view flag, std::string_view command) {
  if (path.empty()) {
    throw Error(ErrorCode::kUsage,
                "'" + std::string(command) + "' requires --" + std::string(flag));
  }
}

OrderedJson Nullable(std::optional<double> value) {
  return value ? OrderedJson(*value) : OrderedJson(nullptr);
}

// NaN becomes null in JSON; keep that explicit.
OrderedJson Number(double value) {
  return std::isfinite(value) ? OrderedJson(value) : OrderedJson(nullptr);
}

std::string Dump(const OrderedJson& j) { return j.dump(2) + "\n"; }

std::string ColumnLabel(const EmbeddingManifest& manifest) {
  return manifest.model_id + "/" + manifest.language;
}

void RequireTsvSafe(const std::string& field, const std::string& id) {
  if (field.find_first_of("\t\n\r") != std::string::npos) {
    throw Error(ErrorCode::kValidation,
                "statement '" + id + "' contains a tab or newline and cannot be written as TSV");
  }
}

// --- expand --------------------------------------------------------------

void RunExpand(const RunConfig& config, OutputStage& stage, RunOutcome&) {
  if (!config.spec.empty()) {
    if (config.language.empty()) {
      throw Error(ErrorCode::kUsage, "'expand --spec' requires --language");
    }
    QuestionnaireSpec spec = LoadQuestionnaire(config.spec);
    std::string out;
    std::vector<std::string> missing;
    for (const auto& q : spec.questions) {
      auto it = q.text.find(config.language);
      if (it == q.text.end()) {
        missing.push_back(q.question_id);
        continue;
      }
      RequireTsvSafe(q.question_id, q.question_id);
      RequireTsvSafe(it->second, q.question_id);
      out += q.question_id + "\t" + it->second + "\n";
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
      throw Error(ErrorCode::kValidation,
                  "questions without '" + config.language + "' text: " + list,
                  config.spec.string());
    }
    stage.Add("statements.tsv", std::move(out));
    return;
  }
  Require(config.verbs, "verbs", "expand");
  Require(config.templates, "templates", "expand");
  auto verbs = LoadInductionVerbs(config.verbs);
  auto templates = LoadTemplateSet(config.templates);
  std::string out;
  for (const auto& prompt : ExpandTemplates(verbs, templates)) {
    RequireTsvSafe(prompt.text, prompt.id());
    out += prompt.id() + "\t" + prompt.text + "\n";
  }
  stage.Add("prompts.tsv", std::move(out));
}

// --- induce --------------------------------------------------------------

void RunInduce(const RunConfig& config, OutputStage& stage, RunOutcome& outcome) {
  Require(config.embeddings, "embeddings", "induce");
  Require(config.verbs, "verbs", "induce");
  Require(config.templates, "templates", "induce");
  auto set = LoadEmbeddingSet(config.embeddings);
  auto verbs = LoadInductionVerbs(config.verbs);
  auto templates = LoadTemplateSet(config.templates);
  InductionResult result;
  try {
    result = InduceFromEmbeddings(set, verbs, templates);
  } catch (const Error& e) {
    throw e.WithContext(config.embeddings.string());
  }
  const auto& model = result.model;
  if (templates.language() != set.manifest().language) {
    outcome.warnings.push_back("template language '" + templates.language() +
                               "' differs from embedding language '" + set.manifest().language +
                               "'");
  }
  if (model.orientation.warning) {
    outcome.warnings.push_back(
        "positive and negative verbs have equal mean projection; orientation fell back to the "
        "first-nonzero-component rule");
  }

  stage.Add("model.json", SerializeModel(model));

  OrderedJson report;
  report["model_id"] = set.manifest().model_id;
  report["language"] = set.manifest().language;
  report["pooling"] = PoolingName(set.manifest().pooling);
  report["dim"] = model.dim();
  report["n_verbs"] = result.verbs.size();
  report["n_templates"] = result.template_count;
  report["explained_variance_ratio"] = model.explained_variance_ratio;
  report["normalizer"] = model.normalizer;
  OrderedJson orientation;
  orientation["rule"] = OrientationRuleName(model.orientation.rule);
  orientation["positive_mean"] = model.orientation.positive_mean;
  orientation["negative_mean"] = model.orientation.negative_mean;
  orientation["flipped"] = model.orientation.flipped;
  orientation["warning"] = model.orientation.warning;
  report["orientation"] = orientation;
  OrderedJson verbs_json = OrderedJson::array();
  std::string csv = CsvLine({"verb_id", "polarity", "raw", "score"});
  std::vector<std::string> row_ids;
  std::vector<double> cells;
  std::vector<std::optional<Polarity>> polarities;
  for (const auto& v : result.verbs) {
    OrderedJson item;
    item["verb_id"] = v.verb_id;
    item["polarity"] = PolarityName(v.polarity);
    item["raw"] = v.raw;
    item["score"] = v.score;
    verbs_json.push_back(item);
    csv += CsvLine({v.verb_id, std::string(PolarityName(v.polarity)), FormatSig6(v.raw),
                    FormatSig6(v.score)});
    row_ids.push_back(v.verb_id);
    cells.push_back(v.score);
    polarities.push_back(v.polarity);
  }
  report["verbs"] = verbs_json;
  stage.Add("induction_report.json", Dump(report));
  stage.Add("induction_verbs.csv", std::move(csv));

  ScoreTable table(std::move(row_ids), {ColumnLabel(set.manifest())}, std::move(cells));
  table.set_polarities(std::move(polarities));
  stage.Add("verb_scores_table.csv", table.ToCsv());
}

// --- score ---------------------------------------------------------------

void RunScore(const RunConfig& config, OutputStage& stage, RunOutcome& outcome) {
  Require(config.model, "model", "score");
  Require(config.embeddings, "embeddings", "score");
  auto model = LoadModel(config.model);
  auto set = LoadEmbeddingSet(config.embeddings);
  if (model.source_manifest.model_id != set.manifest().model_id) {
    outcome.warnings.push_back("model was induced from '" + model.source_manifest.model_id +
                               "' but embeddings come from '" + set.manifest().model_id + "'");
  }
  std::vector<ScoredStatement> scored;
  try {
    scored = ScoreBatch(model, set);
  } catch (const Error& e) {
    throw e.WithContext(config.embeddings.string());
  }
  std::string csv = CsvLine({"id", "text", "raw", "score"});
  OrderedJson items = OrderedJson::array();
  std::vector<std::string> row_ids;
  std::vector<double> cells;
  for (const auto& s : scored) {
    csv += CsvLine({s.id, s.text, FormatSig6(s.raw), FormatSig6(s.score)});
    OrderedJson item;
    item["id"] = s.id;
    item["text"] = s.text;
    item["raw"] = s.raw;
    item["score"] = s.score;
    items.push_back(item);
    row_ids.push_back(s.id);
    cells.push_back(s.score);
  }
  OrderedJson sidecar;
  sidecar["model_id"] = set.manifest().model_id;
  sidecar["language"] = set.manifest().language;
  sidecar["normalizer"] = model.normalizer;
  sidecar["scores"] = items;
  stage.Add("scores.csv", std::move(csv));
  stage.Add("scores.json", Dump(sidecar));
  ScoreTable table(std::move(row_ids), {ColumnLabel(set.manifest())}, std::move(cells));
  stage.Add("score_table.csv", table.ToCsv());
}

// --- mfq -----------------------------------------------------------------

void RunMfq(const RunConfig& config, OutputStage& stage, RunOutcome& outcome) {
  Require(config.model, "model", "mfq");
  Require(config.embeddings, "embeddings", "mfq");
  Require(config.spec, "spec", "mfq");
  auto model = LoadModel(config.model);
  auto set = LoadEmbeddingSet(config.embeddings);
  auto spec = LoadQuestionnaire(config.spec);
  const auto& manifest = set.manifest();
  const std::string language = config.language.empty() ? manifest.language : config.language;
  QuestionnaireResult result;
  try {
    result = ScoreQuestionnaire(model, set, spec, language, config.catch_thresholds);
  } catch (const Error& e) {
    throw e.WithContext(config.embeddings.string());
  }

  std::string aspects_csv =
      CsvLine({"model_id", "language", "aspect", "aspect_score", "n_questions"});
  OrderedJson aspects = OrderedJson::array();
  for (const auto& a : result.aspects) {
    aspects_csv += CsvLine({manifest.model_id, language, std::string(AspectName(a.aspect)),
                            FormatSig6(a.aspect_score), std::to_string(a.n_questions)});
    OrderedJson item;
    item["aspect"] = AspectName(a.aspect);
    item["aspect_score"] = a.aspect_score;
    item["n_questions"] = a.n_questions;
    OrderedJson signed_scores;
    for (const auto& [id, s] : a.signed_scores) signed_scores[id] = s;
    item["signed_scores"] = signed_scores;
    aspects.push_back(item);
  }

  std::string questions_csv = CsvLine({"question_id", "raw", "multiplier", "signed"});
  OrderedJson questions = OrderedJson::array();
  for (const auto& q : result.questions) {
    questions_csv += CsvLine({q.question_id, FormatSig6(q.raw), std::to_string(q.multiplier),
                              FormatSig6(q.signed_score)});
    OrderedJson item;
    item["question_id"] = q.question_id;
    item["aspect"] = AspectName(q.aspect);
    item["raw"] = q.raw;
    item["multiplier"] = q.multiplier;
    item["signed"] = q.signed_score;
    questions.push_back(item);
  }

  std::string catch_csv = CsvLine({"question_id", "kind", "score", "verdict"});
  OrderedJson catches = OrderedJson::array();
  for (const auto& c : result.catches.entries) {
    catch_csv += CsvLine({c.question_id, std::string(CatchKindName(c.kind)), FormatSig6(c.score),
                          std::string(CatchVerdictName(c.verdict))});
    OrderedJson item;
    item["question_id"] = c.question_id;
    item["kind"] = CatchKindName(c.kind);
    item["score"] = c.score;
    item["verdict"] = CatchVerdictName(c.verdict);
    catches.push_back(item);
    if (c.verdict == CatchVerdict::kFlag) {
      outcome.warnings.push_back("catch question '" + c.question_id + "' flagged (score " +
                                 FormatSig6(c.score) + ")");
    }
  }
  OrderedJson catch_report;
  catch_report["thresholds"] = {{"neutral_max_abs", config.catch_thresholds.neutral_max_abs},
                                {"polar_min", config.catch_thresholds.polar_min}};
  catch_report["entries"] = catches;

  OrderedJson sidecar;
  sidecar["model_id"] = manifest.model_id;
  sidecar["language"] = language;
  sidecar["spec_version"] = spec.version;
  sidecar["aspects"] = aspects;
  sidecar["questions"] = questions;
  sidecar["catch_report"] = catch_report;

  if (!config.reference.empty()) {
    auto reference = LoadAspectReference(config.reference);
    std::string comparison_csv = CsvLine({"country", "aspect", "model", "human", "difference"});
    OrderedJson comparisons = OrderedJson::array();
    for (const auto& [country, table] : reference) {
      ComparisonReport cmp;
      try {
        cmp = CompareToReference(result.aspects, table);
      } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " (country '" + country + "')",
                    config.reference.string());
      }
      OrderedJson rows = OrderedJson::array();
      for (const auto& a : cmp.aspects) {
        comparison_csv += CsvLine({country, std::string(AspectName(a.aspect)), FormatSig6(a.model),
                                   FormatSig6(a.human), FormatSig6(a.difference)});
        OrderedJson row;
        row["aspect"] = AspectName(a.aspect);
        row["model"] = a.model;
        row["human"] = a.human;
        row["difference"] = a.difference;
        rows.push_back(row);
      }
      OrderedJson item;
      item["country"] = country;
      item["correlation"] = Nullable(cmp.correlation);
      item["aspects"] = rows;
      comparisons.push_back(item);
    }
    sidecar["comparisons"] = comparisons;
    stage.Add("comparison.csv", std::move(comparison_csv));
  }

  stage.Add("aspects.csv", std::move(aspects_csv));
  stage.Add("questions.csv", std::move(questions_csv));
  stage.Add("catch_report.csv", std::move(catch_csv));
  stage.Add("mfq.json", Dump(sidecar));
}

// --- diverge -------------------------------------------------------------

OrderedJson PairJson(const ScoredPair& p) {
  OrderedJson j;
  j["pair_id"] = p.pair_id;
  j["text_a"] = p.text_a;
  j["text_b"] = p.text_b;
  j["score_a"] = p.score_a;
  j["score_b"] = p.score_b;
  j["delta"] = p.delta;
  j["abs_delta"] = p.abs_delta;
  j["quality"] = Nullable(p.quality);
  return j;
}

void RunDiverge(const RunConfig& config, OutputStage& stage, RunOutcome&) {
  Require(config.model, "model", "diverge");
  Require(config.embeddings, "embeddings", "diverge");
  Require(config.model_b, "model-b", "diverge");
  Require(config.embeddings_b, "embeddings-b", "diverge");
  Require(config.pairs, "pairs", "diverge");
  auto model_a = LoadModel(config.model);
  auto model_b = LoadModel(config.model_b);
  auto set_a = LoadEmbeddingSet(config.embeddings);
  auto set_b = LoadEmbeddingSet(config.embeddings_b);
  auto pairs = LoadPairs(config.pairs);
  std::vector<ScoredPair> scored;
  try {
    scored = ScorePairs(model_a, set_a, model_b, set_b, pairs);
  } catch (const Error& e) {
    throw e.WithContext(config.pairs.string());
  }
  DivergenceReport report = BuildDivergenceReport(scored, config.top_k, config.min_quality,
                                                  config.bins);

  std::string csv =
      CsvLine({"pair_id", "text_a", "text_b", "score_a", "score_b", "delta", "quality"});
  OrderedJson ranked = OrderedJson::array();
  for (const auto& p : report.ranked) {
    csv += CsvLine({p.pair_id, p.text_a, p.text_b, FormatSig6(p.score_a), FormatSig6(p.score_b),
                    FormatSig6(p.delta), p.quality ? FormatSig6(*p.quality) : ""});
    ranked.push_back(PairJson(p));
  }
  stage.Add("ranked_pairs.csv", std::move(csv));
  stage.Add("ranked_pairs.json", Dump(ranked));

  const auto& d = report.distribution;
  std::string histogram_csv = CsvLine({"bin_lo", "bin_hi", "count"});
  const double width = (d.histogram.hi - d.histogram.lo) / static_cast<double>(d.histogram.counts.size());
  OrderedJson counts = OrderedJson::array();
  for (std::size_t i = 0; i < d.histogram.counts.size(); ++i) {
    const double lo = d.histogram.lo + width * static_cast<double>(i);
    const double hi = i + 1 == d.histogram.counts.size() ? d.histogram.hi : lo + width;
    histogram_csv += CsvLine({FormatSig6(lo), FormatSig6(hi), std::to_string(d.histogram.counts[i])});
    counts.push_back(d.histogram.counts[i]);
  }
  stage.Add("delta_histogram.csv", std::move(histogram_csv));

  OrderedJson summary;
  summary["model_a"] = set_a.manifest().model_id + "/" + set_a.manifest().language;
  summary["model_b"] = set_b.manifest().model_id + "/" + set_b.manifest().language;
  summary["top_k"] = config.top_k;
  summary["min_quality"] = Nullable(config.min_quality);
  summary["counts"] = {{"total", report.counts.total},
                       {"filtered_out", report.counts.filtered_out},
                       {"missing_quality", report.counts.missing_quality}};
  OrderedJson distribution;
  distribution["n"] = d.n;
  distribution["mean"] = d.mean;
  distribution["std"] = d.stddev;
  distribution["skewness"] = Nullable(d.skewness);
  distribution["excess_kurtosis"] = Nullable(d.excess_kurtosis);
  distribution["histogram"] = {{"lo", d.histogram.lo}, {"hi", d.histogram.hi}, {"counts", counts}};
  summary["delta_distribution"] = distribution;
  if (report.correlation) {
    OrderedJson corr;
    corr["r_all"] = Number(report.correlation->r_all);
    corr["n_all"] = report.correlation->n_all;
    corr["r_filtered"] = Nullable(report.correlation->r_filtered);
    corr["n_filtered"] = report.correlation->n_filtered;
    summary["delta_quality_correlation"] = corr;
  } else {
    summary["delta_quality_correlation"] = nullptr;
  }
  stage.Add("divergence_summary.json", Dump(summary));
}

// --- correlate / variance ------------------------------------------------

ScoreTable LoadTables(const RunConfig& config, std::string_view command) {
  if (config.tables.empty()) {
    throw Error(ErrorCode::kUsage, "'" + std::string(command) + "' requires --table");
  }
  std::vector<ScoreTable> tables;
  for (const auto& path : config.tables) tables.push_back(ScoreTable::Load(path));
  try {
    return ScoreTable::Join(tables);
  } catch (const Error& e) {
    throw e.WithContext(config.tables.front().string());
  }
}

OrderedJson MatrixJson(const CorrelationMatrix& m) {
  OrderedJson j;
  j["labels"] = m.labels;
  j["diagonal"] = m.semantics == DiagonalSemantics::kSelf ? "self" : "cross_family";
  OrderedJson rows = OrderedJson::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m.at(i, k));
    rows.push_back(row);
  }
  j["values"] = rows;
  return j;
}

void RunCorrelate(const RunConfig& config, OutputStage& stage, RunOutcome&) {
  ScoreTable table = LoadTables(config, "correlate");
  OrderedJson sidecar;
  sidecar["n_rows"] = table.rows();
  bool produced = false;
  if (table.columns() >= 2) {
    CorrelationMatrix m = ComputeCorrelationMatrix(table);
    stage.Add("correlation_matrix.csv", m.ToCsv());
    sidecar["correlation_matrix"] = MatrixJson(m);
    produced = true;
  }
  if (!config.family_a.empty() || !config.family_b.empty()) {
    if (config.family_a.empty() || config.family_b.empty()) {
      throw Error(ErrorCode::kUsage, "--family-a and --family-b must be given together");
    }
    CorrelationMatrix m = ComputeCompositeMatrix(table, config.family_a, config.family_b);
    stage.Add("composite_matrix.csv", m.ToCsv());
    OrderedJson composite = MatrixJson(m);
    composite["below_diagonal"] = config.family_a;
    composite["above_diagonal"] = config.family_b;
    sidecar["composite_matrix"] = composite;
    produced = true;
  }
  if (!config.reference.empty()) {
    auto reference = LoadReference(config.reference);
    std::string csv = CsvLine({"column_id", "r", "n_shared"});
    OrderedJson items = OrderedJson::array();
    for (const auto& column : table.column_ids()) {
      ReferenceCorrelation rc;
      try {
        rc = CorrelationWithReference(table, column, reference);
      } catch (const Error& e) {
        throw e.WithContext(config.reference.string());
      }
      csv += CsvLine({rc.column_id, FormatSig6(rc.r), std::to_string(rc.n_shared)});
      OrderedJson item;
      item["column_id"] = rc.column_id;
      item["r"] = rc.r;
      item["n_shared"] = rc.n_shared;
      items.push_back(item);
    }
    stage.Add("reference_correlations.csv", std::move(csv));
    sidecar["reference_correlations"] = items;
    produced = true;
  }
  if (!produced) {
    throw Error(ErrorCode::kPrecondition,
                "nothing to correlate: need >= 2 columns, --reference, or --family-a/--family-b");
  }
  stage.Add("correlate.json", Dump(sidecar));
}

OrderedJson SummaryJson(const FiveNumberSummary& s) {
  OrderedJson j;
  j["n"] = s.n;
  j["min"] = Number(s.min);
  j["q1"] = Number(s.q1);
  j["median"] = Number(s.median);
  j["q3"] = Number(s.q3);
  j["max"] = Number(s.max);
  return j;
}

void RunVariance(const RunConfig& config, OutputStage& stage, RunOutcome& outcome) {
  ScoreTable table = LoadTables(config, "variance");
  VarianceReport report = VarianceAnalysis(table);
  std::string csv = CsvLine({"row_id", "mean", "variance", "group"});
  OrderedJson rows = OrderedJson::array();
  for (const auto& r : report.rows) {
    csv += CsvLine({r.row_id, FormatSig6(r.mean), FormatSig6(r.variance),
                    std::string(VarianceGroupName(r.group))});
    OrderedJson item;
    item["row_id"] = r.row_id;
    item["mean"] = r.mean;
    item["variance"] = r.variance;
    item["group"] = VarianceGroupName(r.group);
    item["zero_mean"] = r.zero_mean;
    rows.push_back(item);
  }
  if (report.zero_mean_rows > 0) {
    outcome.warnings.push_back(std::to_string(report.zero_mean_rows) +
                               " row(s) have a cross-column mean of exactly 0; grouped as positive");
  }
  std::string groups = CsvLine({"group", "n", "min", "q1", "median", "q3", "max"});
  for (auto [name, s] : {std::pair{"positive", &report.positive},
                         std::pair{"negative", &report.negative}}) {
    groups += CsvLine({name, std::to_string(s->n), FormatSig6(s->min), FormatSig6(s->q1),
                       FormatSig6(s->median), FormatSig6(s->q3), FormatSig6(s->max)});
  }
  OrderedJson sidecar;
  sidecar["columns"] = table.column_ids();
  sidecar["rows"] = rows;
  sidecar["groups"] = {{"positive", SummaryJson(report.positive)},
                       {"negative", SummaryJson(report.negative)}};
  sidecar["zero_mean_rows"] = report.zero_mean_rows;
  stage.Add("variance_report.csv", std::move(csv));
  stage.Add("variance_groups.csv", std::move(groups));
  stage.Add("variance_report.json", Dump(sidecar));
}

}  // namespace

void RunConfig::Set(std::string_view key, std::string_view value) {
  const std::string v(value);
  if (key == "embeddings") {
    embeddings = v;
  } else if (key == "embeddings-b") {
    embeddings_b = v;
  } else if (key == "model") {
    model = v;
  } else if (key == "model-b") {
    model_b = v;
  } else if (key == "verbs") {
    verbs = v;
  } else if (key == "templates") {
    templates = v;
  } else if (key == "spec") {
    spec = v;
  } else if (key == "pairs") {
    pairs = v;
  } else if (key == "table") {
    tables.emplace_back(v);
  } else if (key == "reference") {
    reference = v;
  } else if (key == "out") {
    out = v;
  } else if (key == "language") {
    language = v;
  } else if (key == "family-a") {
    family_a = v;
  } else if (key == "family-b") {
    family_b = v;
  } else if (key == "top-k") {
    top_k = ParseOptionCount(key, value);
  } else if (key == "bins") {
    bins = ParseOptionCount(key, value);
    if (bins == 0) throw Error(ErrorCode::kUsage, "--bins must be >= 1");
  } else if (key == "min-quality") {
    min_quality = ParseOptionDouble(key, value);
  } else if (key == "catch-neutral-max") {
    catch_thresholds.neutral_max_abs = ParseOptionDouble(key, value);
  } else if (key == "catch-polar-min") {
    catch_thresholds.polar_min = ParseOptionDouble(key, value);
  } else {
    throw Error(ErrorCode::kUsage, "unknown option --" + std::string(key));
  }
}

const std::vector<std::string_view>& Subcommands() {
  static const std::vector<std::string_view> kNames = {"expand",  "induce",    "score",   "mfq",
                                                       "diverge", "correlate", "variance"};
  return kNames;
}

void OutputStage::Add(std::string name, std::string contents) {
  files_[std::move(name)] = std::move(contents);
}

std::vector<std::filesystem::path> OutputStage::Commit(const std::filesystem::path& dir) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory: " + ec.message(), dir.string());
  }
  fs::remove(dir / "FAILED", ec);
  std::vector<fs::path> temps;
  auto fail = [&](const std::string& message, const fs::path& where) {
    for (const auto& t : temps) fs::remove(t, ec);
    std::ofstream sentinel(dir / "FAILED", std::ios::trunc);
    sentinel << message << "\n";
    throw Error(ErrorCode::kIo, message, where.string());
  };
  for (const auto& [name, contents] : files_) {
    fs::path tmp = dir / (name + ".tmp");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << contents;
    out.close();
    if (!out) fail("cannot write output file", tmp);
  }
  std::vector<fs::path> written;
  for (const auto& [name, contents] : files_) {
    fs::path final_path = dir / name;
    fs::rename(dir / (name + ".tmp"), final_path, ec);
    if (ec) fail("cannot rename output file: " + ec.message(), final_path);
    written.push_back(final_path);
  }
  return written;
}

RunOutcome Run(const RunConfig& config) {
  RunOutcome outcome;
  OutputStage stage;
  if (config.out.empty()) {
    throw Error(ErrorCode::kUsage, "--out is required");
  }
  const std::string& cmd = config.subcommand;
  if (cmd == "expand") {
    RunExpand(config, stage, outcome);
  } else if (cmd == "induce") {
    RunInduce(config, stage, outcome);
  } else if (cmd == "score") {
    RunScore(config, stage, outcome);
  } else if (cmd == "mfq") {
    RunMfq(config, stage, outcome);
  } else if (cmd == "diverge") {
    RunDiverge(config, stage, outcome);
  } else if (cmd == "correlate") {
    RunCorrelate(config, stage, outcome);
  } else if (cmd == "variance") {
    RunVariance(config, stage, outcome);
  } else {
    throw Error(ErrorCode::kUsage, "unknown subcommand '" + cmd + "'");
  }
  outcome.files = stage.Commit(config.out);
  return outcome;
}

}  // namespace moraldir
