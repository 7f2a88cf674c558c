/* Copyright 2026 The gshare Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "gshare/errors.h"

namespace gshare {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kEmptyInput:
      return "empty-input";
    case ErrorCode::kConflict:
      return "conflict";
    case ErrorCode::kMissingConfiguration:
      return "missing-configuration";
    case ErrorCode::kValidation:
      return "validation";
    case ErrorCode::kNotFound:
      return "not-found";
    case ErrorCode::kInvariant:
      return "invariant";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + message),
      line_(line) {}

}  // namespace gshare
