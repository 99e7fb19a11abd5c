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

#ifndef FAE_ERROR_H_
#define FAE_ERROR_H_

#include <stdexcept>
#include <string>

namespace fae {

// Error categories. Each maps to a stable machine-readable class name and a
// CLI exit code.
enum class ErrorKind {
  kConfig,
  kSchema,
  kParse,
  kEmptySource,
  kRange,
  kNotEnumerable,
  kEmptyContrastClass,
  kConditioningSupport,
  kModel,
  kSize,
  kUnderdetermined,
  kMismatch,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// "schema_error", "empty_contrast_class", ...
const char* error_class_name(ErrorKind kind);

// 2 config, 3 data, 4 model, 5 numeric/size, 6 assertion mismatch.
int exit_code(ErrorKind kind);

}  // namespace fae

#endif  // FAE_ERROR_H_
