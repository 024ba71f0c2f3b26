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

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "moraldir/error.hpp"

namespace moraldir::detail {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// JSON has no literal for non-finite numbers. Python's json module writes
// NaN / Infinity / -Infinity and our own writer would produce null; rewrite
// the bare tokens to a marker string so a record still parses and the
// non-finite value can be rejected by validation with the record id attached.
inline constexpr std::string_view kNonFiniteMarker = "@@non-finite@@";
std::string RewriteNonFiniteTokens(std::string_view text);
bool IsNonFiniteMarker(const Json& value);

// Parses one JSON value; syntax errors become Error(kParse, context).
Json ParseJson(std::string_view text, const std::string& context);

const Json& RequireField(const Json& object, const char* key, const std::string& context);
std::string RequireString(const Json& object, const char* key, const std::string& context);
std::optional<std::string> OptionalString(const Json& object, const char* key,
                                          const std::string& context);

// Numbers; null and the non-finite marker map to NaN so callers can report
// non-finite values.
double AsDouble(const Json& value, const std::string& what, const std::string& context);
double RequireDouble(const Json& object, const char* key, const std::string& context);
long long RequireInteger(const Json& object, const char* key, const std::string& context);

}  // namespace moraldir::detail
