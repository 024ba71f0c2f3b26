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

// Drives the installed-style `moraldir` executable end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "support/cli_fixture.hpp"
#include "support/divergence_fixture.hpp"

namespace {

namespace fs = std::filesystem;
using moraldir::testing::Slurp;
using moraldir::testing::TempDir;

struct CliResult {
  int exit_code = -1;
  std::string err;
};

CliResult RunCli(const std::string& args, const TempDir& dir) {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = std::string(MORALDIR_CLI) + " " + args + " > /dev/null 2> '" +
                          err_path.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = Slurp(err_path);
  return r;
}

std::string Q(const fs::path& p) { return "'" + p.string() + "'"; }

const char kAxisModel[] = R"({
  "format_version": 1,
  "kind": "moral_direction_model",
  "source_manifest": {"format_version": 1, "model_id": "axis", "language": "en", "dim": 2,
                      "pooling": "sentence", "count": 2},
  "dim": 2,
  "normalizer": 1.0,
  "explained_variance_ratio": 1.0,
  "orientation": {"rule": "polarity_means", "positive_mean": 1.0, "negative_mean": -1.0,
                  "flipped": false, "warning": false},
  "mean": [0.0, 0.0],
  "direction": [1.0, 0.0]
}
)";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    files_ = moraldir::testing::WriteCliFixture(dir_.path(),
                                                std::string(MORALDIR_DATA_DIR) + "/mfq30_en.json");
  }

  CliResult Induce(const fs::path& out) {
    return RunCli("induce --embeddings " + Q(files_.prompts) + " --verbs " + Q(files_.verbs) +
                      " --templates " + Q(files_.templates) + " --out " + Q(out),
                  dir_);
  }

  // induce -> score -> mfq into <root>/{induce,score,mfq}.
  void Pipeline(const fs::path& root) {
    ASSERT_EQ(Induce(root / "induce").exit_code, 0);
    const auto model = root / "induce" / "model.json";
    ASSERT_EQ(RunCli("score --model " + Q(model) + " --embeddings " + Q(files_.statements) +
                         " --out " + Q(root / "score"),
                     dir_)
                  .exit_code,
              0);
    ASSERT_EQ(RunCli("mfq --model " + Q(model) + " --embeddings " + Q(files_.statements) +
                         " --spec " + Q(files_.spec) + " --language en --out " + Q(root / "mfq"),
                     dir_)
                  .exit_code,
              0);
  }

  TempDir dir_{"cli"};
  moraldir::testing::CliFixtureFiles files_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(RunCli("--help", dir_).exit_code, 0);
  EXPECT_EQ(RunCli("", dir_).exit_code, 2);
  EXPECT_EQ(RunCli("frobnicate", dir_).exit_code, 2);
  auto r = RunCli("induce --verbs x.csv", dir_);
  EXPECT_EQ(r.exit_code, 2);
}

TEST_F(CliTest, PipelineWritesReports) {
  Pipeline(dir_ / "run");
  for (const char* f : {"induce/model.json", "induce/induction_report.json",
                        "induce/induction_verbs.csv", "score/scores.csv", "score/scores.json",
                        "mfq/aspects.csv", "mfq/questions.csv", "mfq/catch_report.csv",
                        "mfq/mfq.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "run" / f)) << f;
  }
  const auto aspects = Slurp(dir_ / "run" / "mfq" / "aspects.csv");
  EXPECT_EQ(aspects.rfind("model_id,language,aspect,aspect_score,n_questions\n", 0), 0u);
  EXPECT_NE(aspects.find("fixture-model,en,purity,"), std::string::npos);
  EXPECT_EQ(Slurp(dir_ / "run" / "score" / "scores.csv").rfind("id,text,raw,score\n", 0), 0u);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  Pipeline(dir_ / "a");
  Pipeline(dir_ / "b");
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir_ / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir_ / "a");
    EXPECT_EQ(Slurp(entry.path()), Slurp(dir_ / "b" / rel)) << rel;
    ++compared;
  }
  EXPECT_GE(compared, 10u);
}

TEST_F(CliTest, MissingEmbeddingIdNamedInError) {
  // Drop one prompt embedding: the verbs file still references it.
  std::string prompts = Slurp(files_.prompts);
  auto pos = prompts.find("{\"id\":\"neg3#1\"");
  ASSERT_NE(pos, std::string::npos);
  prompts.erase(pos, prompts.find('\n', pos) - pos + 1);
  prompts.replace(prompts.find("\"count\":30"), 10, "\"count\":29");
  dir_.Write("prompts.jsonl", prompts);
  auto r = Induce(dir_ / "out");
  EXPECT_EQ(r.exit_code, 6);
  EXPECT_NE(r.err.find("neg3#1"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("not_found"), std::string::npos) << r.err;
}

TEST_F(CliTest, FailedRunLeavesNoReports) {
  auto r = RunCli("mfq --model " + Q(dir_ / "missing.json") + " --embeddings " +
                      Q(files_.statements) + " --spec " + Q(files_.spec) +
                      " --language en --out " + Q(dir_ / "out"),
                  dir_);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "aspects.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "questions.csv"));
}

TEST_F(CliTest, CorruptEmbeddingsReportLine) {
  std::string text = Slurp(files_.statements);
  auto second = text.find('\n', text.find('\n') + 1) + 1;
  text.insert(second, "{\"id\":\"oops\",\"text\":\"\",\"vector\":[1,2]}\n");
  dir_.Write("bad.jsonl", text);
  auto r = RunCli("score --model " + Q(files_.spec) + " --embeddings " + Q(dir_ / "bad.jsonl") +
                      " --out " + Q(dir_ / "out"),
                  dir_);
  EXPECT_NE(r.exit_code, 0);
  auto model_ok = dir_ / "m";
  ASSERT_EQ(Induce(model_ok).exit_code, 0);
  r = RunCli("score --model " + Q(model_ok / "model.json") + " --embeddings " +
                 Q(dir_ / "bad.jsonl") + " --out " + Q(dir_ / "out"),
             dir_);
  EXPECT_EQ(r.exit_code, 5);
  EXPECT_NE(r.err.find("bad.jsonl:3"), std::string::npos) << r.err;
}

TEST_F(CliTest, TwoQuestionMfqHandMeans) {
  dir_.Write("axis.json", kAxisModel);
  dir_.Write("two.jsonl",
             "{\"format_version\":1,\"model_id\":\"axis\",\"language\":\"en\",\"dim\":2,"
             "\"pooling\":\"sentence\",\"count\":2}\n"
             "{\"id\":\"q1\",\"text\":\"a\",\"vector\":[0.5,7]}\n"
             "{\"id\":\"q2\",\"text\":\"b\",\"vector\":[-0.25,-3]}\n");
  dir_.Write("two.json",
             R"({"version":"two","questions":[
                 {"id":"q1","aspect":"care","multiplier":1,"text":{"en":"a"}},
                 {"id":"q2","aspect":"care","multiplier":-1,"text":{"en":"b"}}]})");
  auto r = RunCli("mfq --model " + Q(dir_ / "axis.json") + " --embeddings " +
                      Q(dir_ / "two.jsonl") + " --spec " + Q(dir_ / "two.json") +
                      " --language en --out " + Q(dir_ / "out"),
                  dir_);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(Slurp(dir_ / "out" / "aspects.csv"),
            "model_id,language,aspect,aspect_score,n_questions\naxis,en,care,0.375,2\n");
  EXPECT_EQ(Slurp(dir_ / "out" / "questions.csv"),
            "question_id,raw,multiplier,signed\nq1,0.5,1,0.5\nq2,-0.25,-1,0.25\n");
}

TEST_F(CliTest, VarianceAndCorrelateOnScoreTables) {
  ASSERT_EQ(Induce(dir_ / "m").exit_code, 0);
  auto r = RunCli("variance --table " + Q(dir_ / "m" / "verb_scores_table.csv") + " --out " +
                      Q(dir_ / "v"),
                  dir_);
  // A single model column has no cross-column variance.
  EXPECT_EQ(r.exit_code, 10) << r.err;
  dir_.Write("t.csv", "row_id,A/en,A/de,B/en,B/de\nr1,1,2,0.5,3\nr2,-1,-0.5,-2,0\nr3,0.25,1,1,-1\n");
  r = RunCli("variance --table " + Q(dir_ / "t.csv") + " --out " + Q(dir_ / "v"), dir_);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "v" / "variance_report.csv"));
  r = RunCli("correlate --table " + Q(dir_ / "t.csv") + " --family-a A --family-b B --out " +
                 Q(dir_ / "c"),
             dir_);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "c" / "composite_matrix.csv"));
}

TEST_F(CliTest, DivergeRanksAndSummarizes) {
  auto corpus = moraldir::testing::MakeDivergenceCorpus(200, 0.5, 3);
  corpus.set_a.Write(dir_ / "a.jsonl");
  corpus.set_b.Write(dir_ / "b.jsonl");
  dir_.Write("ma.json", moraldir::SerializeModel(corpus.model_a));
  dir_.Write("mb.json", moraldir::SerializeModel(corpus.model_b));
  std::string pairs;
  for (const auto& p : corpus.pairs) {
    pairs += "{\"pair_id\":\"" + p.pair_id + "\",\"lang_a\":\"de\",\"text_a\":\"" + p.a.text +
             "\",\"embed_id_a\":\"" + p.a.embed_id + "\",\"lang_b\":\"en\",\"text_b\":\"" +
             p.b.text + "\",\"embed_id_b\":\"" + p.b.embed_id +
             "\",\"quality\":" + std::to_string(*p.quality) + "}\n";
  }
  dir_.Write("pairs.jsonl", pairs);
  const std::string args = "diverge --model " + Q(dir_ / "ma.json") + " --embeddings " +
                           Q(dir_ / "a.jsonl") + " --model-b " + Q(dir_ / "mb.json") +
                           " --embeddings-b " + Q(dir_ / "b.jsonl") + " --pairs " +
                           Q(dir_ / "pairs.jsonl") + " --top-k 20 --min-quality 0.5 --bins 10";
  auto r = RunCli(args + " --out " + Q(dir_ / "d1"), dir_);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  ASSERT_EQ(RunCli(args + " --out " + Q(dir_ / "d2"), dir_).exit_code, 0);
  for (const char* f : {"ranked_pairs.csv", "ranked_pairs.json", "delta_histogram.csv",
                        "divergence_summary.json"}) {
    EXPECT_EQ(Slurp(dir_ / "d1" / f), Slurp(dir_ / "d2" / f)) << f;
  }
  const auto ranked = Slurp(dir_ / "d1" / "ranked_pairs.csv");
  EXPECT_EQ(std::count(ranked.begin(), ranked.end(), '\n'), 21);
  EXPECT_NE(Slurp(dir_ / "d1" / "divergence_summary.json").find("r_filtered"), std::string::npos);
}

}  // namespace
