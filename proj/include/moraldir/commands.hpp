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

#include "moraldir/questionnaire.hpp"

namespace moraldir {

// Everything one subcommand invocation needs. Paths are empty when unset.
struct RunConfig {
  std::string subcommand;
  std::filesystem::path embeddings;
  std::filesystem::path embeddings_b;
  std::filesystem::path model;
  std::filesystem::path model_b;
  std::filesystem::path verbs;
  std::filesystem::path templates;
  std::filesystem::path spec;
  std::filesystem::path pairs;
  std::vector<std::filesystem::path> tables;
  std::filesystem::path reference;
  std::filesystem::path out;
  std::string language;
  std::string family_a;
  std::string family_b;
  std::size_t top_k = 500;
  std::optional<double> min_quality;
  std::size_t bins = 50;
  CatchThresholds catch_thresholds;

  // Sets an option by its flag name without leading dashes ("top-k",
  // "embeddings-b", ...). "table" accumulates. Throws Error(kUsage) for
  // unknown keys or malformed numbers.
  void Set(std::string_view key, std::string_view value);
};

const std::vector<std::string_view>& Subcommands();

struct RunOutcome {
  std::vector<std::filesystem::path> files;  // committed outputs, sorted
  std::vector<std::string> warnings;
};

// Validates the config, runs the subcommand, and writes its reports into
// config.out. Outputs are staged in memory and only committed (temp file +
// rename) after the whole computation succeeded.
RunOutcome Run(const RunConfig& config);

// Name -> contents, committed atomically per file into a directory.
class OutputStage {
 public:
  void Add(std::string name, std::string contents);
  const std::map<std::string, std::string>& files() const { return files_; }

  // On failure removes what it wrote and leaves a FAILED sentinel file.
  std::vector<std::filesystem::path> Commit(const std::filesystem::path& dir) const;

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace moraldir
