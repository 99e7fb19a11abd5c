// Copyright 2026 The FAE Authors.
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

#include "fae/error.h"

namespace fae {

const char* error_class_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config_error";
    case ErrorKind::kSchema: return "schema_error";
    case ErrorKind::kParse: return "parse_error";
    case ErrorKind::kEmptySource: return "empty_source";
    case ErrorKind::kRange: return "range_error";
    case ErrorKind::kNotEnumerable: return "not_enumerable";
    case ErrorKind::kEmptyContrastClass: return "empty_contrast_class";
    case ErrorKind::kConditioningSupport: return "conditioning_support";
    case ErrorKind::kModel: return "model_error";
    case ErrorKind::kSize: return "size_error";
    case ErrorKind::kUnderdetermined: return "underdetermined";
    case ErrorKind::kMismatch: return "mismatch";
  }
  return "unknown_error";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return 2;
    case ErrorKind::kSchema:
    case ErrorKind::kParse:
    case ErrorKind::kEmptySource:
    case ErrorKind::kRange:
    case ErrorKind::kEmptyContrastClass:
    case ErrorKind::kConditioningSupport:
      return 3;
    case ErrorKind::kModel:
      return 4;
    case ErrorKind::kNotEnumerable:
    case ErrorKind::kSize:
    case ErrorKind::kUnderdetermined:
      return 5;
    case ErrorKind::kMismatch:
      return 6;
  }
  return 1;
}

}  // namespace fae
