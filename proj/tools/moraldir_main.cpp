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

// moraldir command-line tool. Thin wrapper over the C API: flags are parsed
// here and forwarded verbatim to md_run_config_set.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "moraldir/moraldir.h"

namespace {

struct Subcommand {
  const char* name;
  const char* description;
  std::vector<std::pair<const char*, const char*>> flags;  // name, help
};

const std::vector<Subcommand>& SubcommandTable() {
  static const std::vector<Subcommand> kTable = {
      {"expand",
       "Write id<TAB>text statement lists for an embedding exporter",
       {{"verbs", "Induction verbs CSV (verb_id,surface,polarity)"},
        {"templates", "Prompt templates JSON"},
        {"spec", "Questionnaire spec JSON (instead of verbs/templates)"},
        {"language", "Language of the questionnaire texts to write"},
        {"out", "Output directory"}}},
      {"induce",
       "Induce a moral direction model from templated prompt embeddings",
       {{"embeddings", "Prompt embedding file (ids <verb_id>#<template_index>)"},
        {"verbs", "Induction verbs CSV"},
        {"templates", "Prompt templates JSON"},
        {"out", "Output directory"}}},
      {"score",
       "Score every statement of an embedding file",
       {{"model", "Model JSON written by induce"},
        {"embeddings", "Embedding file"},
        {"out", "Output directory"}}},
      {"mfq",
       "Score a moral foundations questionnaire and pool per aspect",
       {{"model", "Model JSON"},
        {"embeddings", "Embeddings of the questionnaire statements (id = question id)"},
        {"spec", "Questionnaire spec JSON"},
        {"reference", "Human aspect means CSV (aspect,<country>,...)"},
        {"language", "Language tag (defaults to the embedding manifest language)"},
        {"catch-neutral-max", "Neutral catch flags when |score| exceeds this (0.15)"},
        {"catch-polar-min", "Polar catch flags when score is below this (0.25)"},
        {"out", "Output directory"}}},
      {"diverge",
       "Rank parallel sentence pairs by score difference between two models",
       {{"model", "Model JSON for side a"},
        {"embeddings", "Embeddings for side a"},
        {"model-b", "Model JSON for side b"},
        {"embeddings-b", "Embeddings for side b"},
        {"pairs", "Parallel pairs file (newline-delimited JSON)"},
        {"top-k", "Number of ranked pairs to report (500)"},
        {"min-quality", "Drop pairs with translation quality below this"},
        {"bins", "Histogram bins for the delta distribution (50)"},
        {"out", "Output directory"}}},
      {"correlate",
       "Correlation matrices and reference correlations over score tables",
       {{"table", "Score table CSV; repeat to join several on row_id"},
        {"reference", "Reference CSV (row_id,value)"},
        {"family-a", "Model id drawn below the diagonal of the composite matrix"},
        {"family-b", "Model id drawn above the diagonal of the composite matrix"},
        {"out", "Output directory"}}},
      {"variance",
       "Per-row variance across columns, grouped by mean sign",
       {{"table", "Score table CSV; repeat to join several on row_id"},
        {"out", "Output directory"}}},
  };
  return kTable;
}

int ReportError(md_status status) {
  const char* context = md_last_error_context();
  std::fprintf(stderr, "error[%s] code=%d%s%s: %s\n", md_status_name(status),
               static_cast<int>(status), context[0] ? " at=" : "", context,
               md_last_error_message());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moraldir: moral direction probing of sentence embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", md_version());

  // flag values per subcommand, in registration order
  std::map<std::string, std::vector<std::pair<std::string, std::vector<std::string>>>> values;
  for (const auto& sub : SubcommandTable()) {
    auto* cmd = app.add_subcommand(sub.name, sub.description);
    auto& slots = values[sub.name];
    slots.reserve(sub.flags.size());
    for (const auto& [flag, help] : sub.flags) {
      slots.emplace_back(flag, std::vector<std::string>{});
      auto* opt = cmd->add_option(std::string("--") + flag, slots.back().second, help);
      if (std::string(flag) != "table") opt->expected(1);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(MD_ERR_USAGE);
  }

  const CLI::App* chosen = app.get_subcommands().front();
  md_run_config* config = nullptr;
  md_status status = md_run_config_new(chosen->get_name().c_str(), &config);
  if (status != MD_OK) return ReportError(status);

  for (const auto& [flag, given] : values[chosen->get_name()]) {
    for (const auto& value : given) {
      status = md_run_config_set(config, flag.c_str(), value.c_str());
      if (status != MD_OK) {
        md_run_config_free(config);
        return ReportError(status);
      }
    }
  }

  status = md_run(config);
  if (status != MD_OK) {
    md_run_config_free(config);
    return ReportError(status);
  }
  for (std::size_t i = 0; const char* warning = md_run_warning(config, i); ++i) {
    std::fprintf(stderr, "warning: %s\n", warning);
  }
  for (std::size_t i = 0; const char* path = md_run_output(config, i); ++i) {
    std::printf("wrote %s\n", path);
  }
  md_run_config_free(config);
  return 0;
}
