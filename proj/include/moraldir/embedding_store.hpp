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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace moraldir {

enum class Pooling { kSentence, kMeanToken };

std::string_view PoolingName(Pooling pooling);
std::optional<Pooling> PoolingFromName(std::string_view name);

inline constexpr int kEmbeddingFormatVersion = 1;

// Header line of an embedding file. Model id and language are opaque and
// only ever compared for equality.
struct EmbeddingManifest {
  int format_version = kEmbeddingFormatVersion;
  std::string model_id;
  std::string language;
  std::size_t dim = 0;
  Pooling pooling = Pooling::kSentence;
  std::size_t count = 0;

  bool operator==(const EmbeddingManifest&) const = default;
};

struct EmbeddingRecord {
  std::string id;
  std::string text;
  std::vector<double> vector;

  bool operator==(const EmbeddingRecord&) const = default;
};

// Immutable, validated set of embeddings keyed by statement id. Copies share
// the underlying storage, so passing by value is cheap and thread-safe.
class EmbeddingSet {
 public:
  // Validates every invariant (dim, finiteness, unique ids, count) and
  // throws Error on the first violation. `manifest.count` is overwritten
  // with records.size() only when `fill_count` is true.
  static EmbeddingSet Create(EmbeddingManifest manifest, std::vector<EmbeddingRecord> records,
                             bool fill_count = true);

  static EmbeddingSet Parse(std::string_view text, std::string_view source);
  static EmbeddingSet Load(const std::filesystem::path& path);

  const EmbeddingManifest& manifest() const { return data_->manifest; }
  std::size_t dim() const { return data_->manifest.dim; }
  std::size_t size() const { return data_->records.size(); }

  // Records in file order.
  const std::vector<EmbeddingRecord>& records() const { return data_->records; }

  bool Contains(std::string_view id) const;
  const EmbeddingRecord* Find(std::string_view id) const;

  // Throws Error(kNotFound) carrying the id.
  std::span<const double> Lookup(std::string_view id) const;
  const EmbeddingRecord& Record(std::string_view id) const;

  // Header line plus one record per line, shortest round-trip decimals.
  std::string Serialize() const;
  void Write(const std::filesystem::path& path) const;

 private:
  struct Data {
    EmbeddingManifest manifest;
    std::vector<EmbeddingRecord> records;
    std::unordered_map<std::string, std::size_t> index;
  };
  explicit EmbeddingSet(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

inline EmbeddingSet LoadEmbeddingSet(const std::filesystem::path& path) {
  return EmbeddingSet::Load(path);
}

}  // namespace moraldir
