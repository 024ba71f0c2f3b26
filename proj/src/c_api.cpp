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

#include "moraldir/moraldir.h"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "moraldir/analysis.hpp"
#include "moraldir/commands.hpp"
#include "moraldir/embedding_store.hpp"
#include "moraldir/error.hpp"
#include "moraldir/moral_direction.hpp"

struct md_embedding_set {
  moraldir::EmbeddingSet set;
};

struct md_model {
  moraldir::MoralDirectionModel model;
};

struct md_run_config {
  moraldir::RunConfig config;
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;
};

namespace {

thread_local std::string g_error_message;
thread_local std::string g_error_context;

md_status Fail(md_status status, std::string message, std::string context = {}) {
  g_error_message = std::move(message);
  g_error_context = std::move(context);
  return status;
}

template <typename Fn>
md_status Guard(Fn&& fn) noexcept {
  try {
    fn();
    return MD_OK;
  } catch (const moraldir::Error& e) {
    return Fail(static_cast<md_status>(e.code()), e.what(), e.context());
  } catch (const std::bad_alloc&) {
    return Fail(MD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(MD_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(MD_ERR_INTERNAL, "unknown exception");
  }
}

md_status NullArgument(const char* name) {
  return Fail(MD_ERR_USAGE, std::string("null argument: ") + name);
}

}  // namespace

extern "C" {

const char* md_version(void) { return "1.0.0"; }

const char* md_status_name(md_status status) {
  if (status == MD_OK) return "ok";
  static thread_local std::string name;
  name = std::string(moraldir::ErrorCodeName(static_cast<moraldir::ErrorCode>(status)));
  return name.c_str();
}

const char* md_last_error_message(void) { return g_error_message.c_str(); }
const char* md_last_error_context(void) { return g_error_context.c_str(); }

md_status md_embedding_set_load(const char* path, md_embedding_set** out) {
  if (path == nullptr) return NullArgument("path");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] { *out = new md_embedding_set{moraldir::EmbeddingSet::Load(path)}; });
}

void md_embedding_set_free(md_embedding_set* set) { delete set; }

size_t md_embedding_set_dim(const md_embedding_set* set) { return set ? set->set.dim() : 0; }

size_t md_embedding_set_count(const md_embedding_set* set) { return set ? set->set.size() : 0; }

const char* md_embedding_set_model_id(const md_embedding_set* set) {
  return set ? set->set.manifest().model_id.c_str() : nullptr;
}

const char* md_embedding_set_language(const md_embedding_set* set) {
  return set ? set->set.manifest().language.c_str() : nullptr;
}

const char* md_embedding_set_id_at(const md_embedding_set* set, size_t index) {
  if (set == nullptr || index >= set->set.size()) return nullptr;
  return set->set.records()[index].id.c_str();
}

md_status md_embedding_set_lookup(const md_embedding_set* set, const char* id, double* out,
                                  size_t out_len) {
  if (set == nullptr) return NullArgument("set");
  if (id == nullptr) return NullArgument("id");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    auto vector = set->set.Lookup(id);
    if (out_len != vector.size()) {
      throw moraldir::Error(moraldir::ErrorCode::kDimensionMismatch,
                            "output buffer has length " + std::to_string(out_len) +
                                ", vector has dimension " + std::to_string(vector.size()));
    }
    std::copy(vector.begin(), vector.end(), out);
  });
}

md_status md_model_induce(const md_embedding_set* set, const char* verbs_path,
                          const char* templates_path, md_model** out) {
  if (set == nullptr) return NullArgument("set");
  if (verbs_path == nullptr) return NullArgument("verbs_path");
  if (templates_path == nullptr) return NullArgument("templates_path");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    auto verbs = moraldir::LoadInductionVerbs(verbs_path);
    auto templates = moraldir::LoadTemplateSet(templates_path);
    *out = new md_model{moraldir::InduceFromEmbeddings(set->set, verbs, templates).model};
  });
}

md_status md_model_load(const char* path, md_model** out) {
  if (path == nullptr) return NullArgument("path");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] { *out = new md_model{moraldir::LoadModel(path)}; });
}

md_status md_model_save(const md_model* model, const char* path) {
  if (model == nullptr) return NullArgument("model");
  if (path == nullptr) return NullArgument("path");
  return Guard([&] {
    moraldir::OutputStage stage;
    std::filesystem::path target(path);
    stage.Add(target.filename().string(), moraldir::SerializeModel(model->model));
    stage.Commit(target.has_parent_path() ? target.parent_path() : std::filesystem::path("."));
  });
}

void md_model_free(md_model* model) { delete model; }

size_t md_model_dim(const md_model* model) { return model ? model->model.dim() : 0; }

double md_model_normalizer(const md_model* model) { return model ? model->model.normalizer : 0.0; }

double md_model_explained_variance_ratio(const md_model* model) {
  return model ? model->model.explained_variance_ratio : 0.0;
}

md_status md_model_direction(const md_model* model, double* out, size_t out_len) {
  if (model == nullptr) return NullArgument("model");
  if (out == nullptr) return NullArgument("out");
  if (out_len != model->model.dim()) {
    return Fail(MD_ERR_DIMENSION_MISMATCH, "output buffer has length " + std::to_string(out_len) +
                                               ", model has dimension " +
                                               std::to_string(model->model.dim()));
  }
  std::copy(model->model.direction.begin(), model->model.direction.end(), out);
  return MD_OK;
}

md_status md_model_score(const md_model* model, const double* embedding, size_t dim, double* raw,
                         double* score) {
  if (model == nullptr) return NullArgument("model");
  if (embedding == nullptr) return NullArgument("embedding");
  return Guard([&] {
    auto s = moraldir::Score(model->model, std::span<const double>(embedding, dim));
    if (raw) *raw = s.raw;
    if (score) *score = s.score;
  });
}

md_status md_pearson(const double* x, const double* y, size_t n, double* r) {
  if (x == nullptr) return NullArgument("x");
  if (y == nullptr) return NullArgument("y");
  if (r == nullptr) return NullArgument("r");
  return Guard([&] {
    *r = moraldir::Pearson(std::span<const double>(x, n), std::span<const double>(y, n));
  });
}

md_status md_run_config_new(const char* subcommand, md_run_config** out) {
  if (subcommand == nullptr) return NullArgument("subcommand");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    std::string name(subcommand);
    const auto& known = moraldir::Subcommands();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw moraldir::Error(moraldir::ErrorCode::kUsage, "unknown subcommand '" + name + "'");
    }
    auto* config = new md_run_config;
    config->config.subcommand = std::move(name);
    *out = config;
  });
}

void md_run_config_free(md_run_config* config) { delete config; }

md_status md_run_config_set(md_run_config* config, const char* key, const char* value) {
  if (config == nullptr) return NullArgument("config");
  if (key == nullptr) return NullArgument("key");
  if (value == nullptr) return NullArgument("value");
  return Guard([&] { config->config.Set(key, value); });
}

md_status md_run(md_run_config* config) {
  if (config == nullptr) return NullArgument("config");
  config->warnings.clear();
  config->outputs.clear();
  return Guard([&] {
    auto outcome = moraldir::Run(config->config);
    config->warnings = std::move(outcome.warnings);
    for (const auto& path : outcome.files) config->outputs.push_back(path.string());
  });
}

const char* md_run_warning(const md_run_config* config, size_t index) {
  if (config == nullptr || index >= config->warnings.size()) return nullptr;
  return config->warnings[index].c_str();
}

const char* md_run_output(const md_run_config* config, size_t index) {
  if (config == nullptr || index >= config->outputs.size()) return nullptr;
  return config->outputs[index].c_str();
}

}  // extern "C"
