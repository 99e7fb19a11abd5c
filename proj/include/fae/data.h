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

#ifndef FAE_DATA_H_
#define FAE_DATA_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "fae/references.h"

namespace fae {

// Header column carrying row probabilities instead of a feature.
inline constexpr std::string_view kWeightColumn = "__weight__";

// Columns with at most this many distinct, all-integral values are
// inferred discrete.
inline constexpr int kDefaultDiscreteThreshold = 16;

struct CsvSource {
  std::filesystem::path path;
  char delimiter = ',';
  std::map<std::string, FeatureKind> kind_overrides;
  int discrete_threshold = kDefaultDiscreteThreshold;
};

FeatureKind infer_feature_kind(std::span<const double> column,
                               int threshold = kDefaultDiscreteThreshold);

Dataset load_dataset(const CsvSource& source);

// Parses CSV text. `origin` prefixes diagnostics ("<origin>:<row>:<col>").
Dataset parse_dataset(std::istream& in, const CsvSource& options,
                      std::string_view origin = "<csv>");

// Writes a header row plus one line per row with 17 significant digits.
// A __weight__ column is emitted when the dataset carries explicit weights.
void write_dataset(const Dataset& data, std::ostream& out, char delimiter = ',');

// Parses "1,0.5,2" into a vector (used for inline inputs and points).
FeatureVector parse_vector(std::string_view text, char delimiter = ',');

}  // namespace fae

#endif  // FAE_DATA_H_
