// Copyright 2026 The dronefx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dronefx/error.hpp"

namespace dronefx {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyName: return "EmptyName";
    case ErrorCode::kDuplicateCase: return "DuplicateCase";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kHashInterrupted: return "HashInterrupted";
    case ErrorCode::kUnknownSource: return "UnknownSource";
    case ErrorCode::kVerificationUnavailable: return "VerificationUnavailable";
    case ErrorCode::kRefusedUnverified: return "RefusedUnverified";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kNotFat32: return "NotFat32";
    case ErrorCode::kMalformedName: return "MalformedName";
    case ErrorCode::kNotJpeg: return "NotJpeg";
    case ErrorCode::kNoExif: return "NoExif";
    case ErrorCode::kNotTiff: return "NotTiff";
    case ErrorCode::kZeroDenominator: return "ZeroDenominator";
    case ErrorCode::kNoHeader: return "NoHeader";
    case ErrorCode::kInvalidRule: return "InvalidRule";
    case ErrorCode::kInvalidColumnMap: return "InvalidColumnMap";
    case ErrorCode::kUnknownFormat: return "UnknownFormat";
    case ErrorCode::kInvalidCase: return "InvalidCase";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace dronefx
