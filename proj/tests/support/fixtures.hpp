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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "moraldir/embedding_store.hpp"
#include "moraldir/moral_direction.hpp"

namespace moraldir::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("moraldir_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  std::filesystem::path Write(const std::string& name, const std::string& contents) const {
    auto p = path_ / name;
    std::ofstream out(p, std::ios::binary);
    out << contents;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<double> RandomVector(std::mt19937_64& rng, std::size_t dim, double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> v(dim);
  for (double& x : v) x = normal(rng);
  return v;
}

inline EmbeddingManifest Manifest(std::size_t dim, std::string model_id = "toy-model",
                                  std::string language = "en") {
  EmbeddingManifest m;
  m.model_id = std::move(model_id);
  m.language = std::move(language);
  m.dim = dim;
  return m;
}

// Induction fixture: positive verbs near +2 e1, negative verbs near -2 e1,
// N(0, sigma) noise on the remaining axes, one prompt per template.
struct PolarityFixture {
  std::vector<InductionVerb> verbs;
  std::vector<std::string> templates;
  EmbeddingSet prompts = EmbeddingSet::Create(Manifest(1), {});
};

inline PolarityFixture MakePolarityFixture(std::size_t n_positive = 5, std::size_t n_negative = 5,
                                           std::size_t n_templates = 3, std::size_t dim = 8,
                                           double sigma = 0.1, std::uint64_t seed = 20240601) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  PolarityFixture f;
  for (std::size_t t = 0; t < n_templates; ++t) {
    f.templates.push_back("Template " + std::to_string(t) + ": should I [verb]?");
  }
  std::vector<EmbeddingRecord> records;
  auto add_verb = [&](const std::string& id, Polarity polarity) {
    f.verbs.push_back(InductionVerb{id, id, polarity});
    for (std::size_t t = 0; t < n_templates; ++t) {
      std::vector<double> v(dim, 0.0);
      v[0] = polarity == Polarity::kPositive ? 2.0 : -2.0;
      for (std::size_t j = 1; j < dim; ++j) v[j] = noise(rng);
      records.push_back(EmbeddingRecord{PromptId(id, t), "prompt", v});
    }
  };
  for (std::size_t i = 0; i < n_positive; ++i) add_verb("pos" + std::to_string(i), Polarity::kPositive);
  for (std::size_t i = 0; i < n_negative; ++i) add_verb("neg" + std::to_string(i), Polarity::kNegative);
  f.prompts = EmbeddingSet::Create(Manifest(dim, "fixture-model", "en"), std::move(records));
  return f;
}

inline std::string VerbsCsv(const std::vector<InductionVerb>& verbs) {
  std::string out = "verb_id,surface,polarity\n";
  for (const auto& v : verbs) {
    out += v.verb_id + "," + v.surface + "," + std::string(PolarityName(v.polarity)) + "\n";
  }
  return out;
}

inline std::string TemplatesJson(const std::vector<std::string>& templates,
                                 const std::string& language = "en") {
  std::string out = "{\"language\": \"" + language + "\", \"templates\": [";
  for (std::size_t i = 0; i < templates.size(); ++i) {
    out += (i ? ", \"" : "\"") + templates[i] + "\"";
  }
  return out + "]}\n";
}

}  // namespace moraldir::testing
