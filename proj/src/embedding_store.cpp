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

#include "moraldir/embedding_store.hpp"

#include <cmath>
#include <fstream>

#include "json_util.hpp"
#include "moraldir/error.hpp"
#include "moraldir/text_io.hpp"

namespace moraldir {

using detail::Json;
using detail::OrderedJson;

std::string_view PoolingName(Pooling pooling) {
  return pooling == Pooling::kSentence ? "sentence" : "mean_token";
}

std::optional<Pooling> PoolingFromName(std::string_view name) {
  if (name == "sentence") return Pooling::kSentence;
  if (name == "mean_token") return Pooling::kMeanToken;
  return std::nullopt;
}

namespace {

void ValidateManifest(const EmbeddingManifest& manifest, const std::string& context) {
  if (manifest.format_version != kEmbeddingFormatVersion) {
    throw Error(ErrorCode::kValidation,
                "unsupported format_version " + std::to_string(manifest.format_version), context);
  }
  if (manifest.dim < 1) {
    throw Error(ErrorCode::kValidation, "manifest dim must be >= 1", context);
  }
}

void ValidateRecord(const EmbeddingRecord& record, std::size_t dim) {
  if (record.id.empty()) {
    throw Error(ErrorCode::kValidation, "record id must be non-empty");
  }
  if (record.vector.size() != dim) {
    throw Error(ErrorCode::kValidation, "record '" + record.id + "' has " +
                                            std::to_string(record.vector.size()) +
                                            " components, manifest dim is " + std::to_string(dim));
  }
  for (std::size_t i = 0; i < record.vector.size(); ++i) {
    if (!std::isfinite(record.vector[i])) {
      throw Error(ErrorCode::kValidation, "record '" + record.id +
                                              "' has a non-finite component at index " +
                                              std::to_string(i));
    }
  }
}

EmbeddingManifest ParseManifest(const Json& header, const std::string& context) {
  EmbeddingManifest manifest;
  long long version = detail::RequireInteger(header, "format_version", context);
  manifest.format_version = static_cast<int>(version);
  manifest.model_id = detail::RequireString(header, "model_id", context);
  manifest.language = detail::RequireString(header, "language", context);
  long long dim = detail::RequireInteger(header, "dim", context);
  if (dim < 1) throw Error(ErrorCode::kValidation, "manifest dim must be >= 1", context);
  manifest.dim = static_cast<std::size_t>(dim);
  std::string pooling = detail::RequireString(header, "pooling", context);
  auto parsed = PoolingFromName(pooling);
  if (!parsed) {
    throw Error(ErrorCode::kValidation,
                "pooling must be 'sentence' or 'mean_token', got '" + pooling + "'", context);
  }
  manifest.pooling = *parsed;
  long long count = detail::RequireInteger(header, "count", context);
  if (count < 0) throw Error(ErrorCode::kValidation, "manifest count must be >= 0", context);
  manifest.count = static_cast<std::size_t>(count);
  ValidateManifest(manifest, context);
  return manifest;
}

EmbeddingRecord ParseRecord(const Json& object, const std::string& context) {
  EmbeddingRecord record;
  record.id = detail::RequireString(object, "id", context);
  record.text = detail::RequireString(object, "text", context);
  const Json& vector = detail::RequireField(object, "vector", context);
  if (!vector.is_array()) {
    throw Error(ErrorCode::kParse, "field 'vector' must be an array", context);
  }
  record.vector.reserve(vector.size());
  for (const Json& component : vector) {
    record.vector.push_back(detail::AsDouble(component, "vector component", context));
  }
  return record;
}

}  // namespace

EmbeddingSet EmbeddingSet::Create(EmbeddingManifest manifest, std::vector<EmbeddingRecord> records,
                                  bool fill_count) {
  ValidateManifest(manifest, {});
  if (fill_count) manifest.count = records.size();
  if (manifest.count != records.size()) {
    throw Error(ErrorCode::kValidation, "manifest count " + std::to_string(manifest.count) +
                                            " does not match " + std::to_string(records.size()) +
                                            " records");
  }
  auto data = std::make_shared<Data>();
  data->index.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ValidateRecord(records[i], manifest.dim);
    if (!data->index.emplace(records[i].id, i).second) {
      throw Error(ErrorCode::kValidation, "duplicate record id '" + records[i].id + "'");
    }
  }
  data->manifest = std::move(manifest);
  data->records = std::move(records);
  return EmbeddingSet(std::move(data));
}

EmbeddingSet EmbeddingSet::Parse(std::string_view text, std::string_view source) {
  auto data = std::make_shared<Data>();
  const std::string src(source);
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    const std::string context = src + ":" + std::to_string(line_no);
    Json value = detail::ParseJson(line, context);
    if (!have_header) {
      data->manifest = ParseManifest(value, context);
      have_header = true;
      continue;
    }
    EmbeddingRecord record = ParseRecord(value, context);
    try {
      ValidateRecord(record, data->manifest.dim);
    } catch (const Error& e) {
      throw e.WithContext(context);
    }
    if (!data->index.emplace(record.id, data->records.size()).second) {
      throw Error(ErrorCode::kValidation, "duplicate record id '" + record.id + "'", context);
    }
    data->records.push_back(std::move(record));
  }
  if (!have_header) {
    throw Error(ErrorCode::kParse, "missing header line", src + ":1");
  }
  if (data->manifest.count != data->records.size()) {
    throw Error(ErrorCode::kValidation,
                "manifest count " + std::to_string(data->manifest.count) + " does not match " +
                    std::to_string(data->records.size()) + " records",
                src);
  }
  return EmbeddingSet(std::move(data));
}

EmbeddingSet EmbeddingSet::Load(const std::filesystem::path& path) {
  return Parse(ReadFileToString(path), path.string());
}

bool EmbeddingSet::Contains(std::string_view id) const { return Find(id) != nullptr; }

const EmbeddingRecord* EmbeddingSet::Find(std::string_view id) const {
  auto it = data_->index.find(std::string(id));
  return it == data_->index.end() ? nullptr : &data_->records[it->second];
}

const EmbeddingRecord& EmbeddingSet::Record(std::string_view id) const {
  const EmbeddingRecord* record = Find(id);
  if (record == nullptr) {
    throw Error(ErrorCode::kNotFound, "embedding id not found: '" + std::string(id) + "'");
  }
  return *record;
}

std::span<const double> EmbeddingSet::Lookup(std::string_view id) const {
  return Record(id).vector;
}

std::string EmbeddingSet::Serialize() const {
  const auto& m = data_->manifest;
  OrderedJson header;
  header["format_version"] = m.format_version;
  header["model_id"] = m.model_id;
  header["language"] = m.language;
  header["dim"] = m.dim;
  header["pooling"] = PoolingName(m.pooling);
  header["count"] = data_->records.size();
  std::string out = header.dump() + "\n";
  for (const auto& record : data_->records) {
    OrderedJson line;
    line["id"] = record.id;
    line["text"] = record.text;
    line["vector"] = record.vector;
    out += line.dump() + "\n";
  }
  return out;
}

void EmbeddingSet::Write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open file for writing", path.string());
  out << Serialize();
  if (!out) throw Error(ErrorCode::kIo, "write failed", path.string());
}

}  // namespace moraldir
