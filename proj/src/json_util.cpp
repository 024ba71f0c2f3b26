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

#include "json_util.hpp"

#include <array>

namespace moraldir::detail {

std::string RewriteNonFiniteTokens(std::string_view text) {
  static constexpr std::array<std::string_view, 5> kTokens = {"-Infinity", "+Infinity", "Infinity",
                                                              "-NaN", "NaN"};
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < text.size()) {
        out.push_back(text[i + 1]);
        i += 2;
        continue;
      }
      if (c == '"') in_string = false;
      ++i;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      ++i;
      continue;
    }
    bool replaced = false;
    for (auto token : kTokens) {
      if (text.substr(i, token.size()) == token) {
        out += '"';
        out += kNonFiniteMarker;
        out += '"';
        i += token.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

Json ParseJson(std::string_view text, const std::string& context) {
  try {
    return Json::parse(RewriteNonFiniteTokens(text));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what(), context);
  }
}

const Json& RequireField(const Json& object, const char* key, const std::string& context) {
  if (!object.is_object()) {
    throw Error(ErrorCode::kParse, "expected a JSON object", context);
  }
  auto it = object.find(key);
  if (it == object.end()) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'", context);
  }
  return *it;
}

std::string RequireString(const Json& object, const char* key, const std::string& context) {
  const Json& value = RequireField(object, key, context);
  if (!value.is_string()) {
    throw Error(ErrorCode::kParse, std::string("field '") + key + "' must be a string", context);
  }
  return value.get<std::string>();
}

std::optional<std::string> OptionalString(const Json& object, const char* key,
                                          const std::string& context) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::kParse, std::string("field '") + key + "' must be a string", context);
  }
  return it->get<std::string>();
}

bool IsNonFiniteMarker(const Json& value) {
  return value.is_string() && value.get_ref<const std::string&>() == kNonFiniteMarker;
}

double AsDouble(const Json& value, const std::string& what, const std::string& context) {
  if (value.is_null() || IsNonFiniteMarker(value)) return std::numeric_limits<double>::quiet_NaN();
  if (!value.is_number()) {
    throw Error(ErrorCode::kParse, what + " must be a number", context);
  }
  return value.get<double>();
}

double RequireDouble(const Json& object, const char* key, const std::string& context) {
  return AsDouble(RequireField(object, key, context), std::string("field '") + key + "'", context);
}

long long RequireInteger(const Json& object, const char* key, const std::string& context) {
  const Json& value = RequireField(object, key, context);
  if (!value.is_number_integer()) {
    throw Error(ErrorCode::kParse, std::string("field '") + key + "' must be an integer", context);
  }
  return value.get<long long>();
}

}  // namespace moraldir::detail
