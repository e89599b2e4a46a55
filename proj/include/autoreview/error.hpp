/*
 * Copyright 2026 The Autoreview Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace autoreview {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyDocument,
  kUnrecognizedStructure,
  kBudgetTooSmall,
  kContextOverflow,
  kTransportFailure,
  kBackendRefusal,
  kScriptParseError,
  kScriptExhausted,
  kTemplateError,
  kMaxAttemptsExceeded,
  kInvalidReview,
  kMissingAbstract,
  kInvalidTransformation,
  kNoEligibleSentence,
  kDuplicateRating,
  kSchemaMismatch,
  kIoFailure,
  kConfigError,
};

std::string_view to_string(ErrorCode code);

/// Base class for every failure raised by the library. The code is stable and
/// is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ScriptParseError : public Error {
 public:
  ScriptParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kScriptParseError, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  /// 1-based line of the offending entry; 0 when the whole file is at fault.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace autoreview
