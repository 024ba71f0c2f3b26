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

#include <stdexcept>
#include <string>
#include <string_view>

namespace moraldir {

// Error categories. Numeric values are shared with the C API status codes
// and double as CLI exit codes.
enum class ErrorCode : int {
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kValidation = 5,
  kNotFound = 6,
  kDegenerate = 7,
  kInsufficientData = 8,
  kInsufficientVariance = 9,
  kPrecondition = 10,
  kDimensionMismatch = 11,
  kInternal = 70,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }

  // "file:line" or "file" when known, empty otherwise.
  const std::string& context() const noexcept { return context_; }

  // Returns a copy carrying `context` unless one is already set.
  Error WithContext(std::string context) const {
    if (!context_.empty()) return *this;
    return Error(code_, what(), std::move(context));
  }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace moraldir
