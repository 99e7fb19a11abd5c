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

#ifndef FAE_REFERENCES_H_
#define FAE_REFERENCES_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fae/core.h"

namespace fae {

// Rows of a tabular distribution. Row weights are probabilities; absent
// weights mean uniform 1/N.
class Dataset {
 public:
  Dataset(FeatureSchema schema, std::vector<FeatureVector> rows,
          std::optional<std::vector<double>> weights = std::nullopt);

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<FeatureVector>& rows() const { return rows_; }
  const std::vector<double>& weights() const { return weights_; }
  const FeatureVector& row(std::size_t i) const { return rows_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  bool has_explicit_weights() const { return explicit_weights_; }

  std::vector<double> column(int feature) const;

  // Rows at `indices`, weights renormalized over the selection.
  Dataset subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  FeatureSchema schema_;
  std::vector<FeatureVector> rows_;
  std::vector<double> weights_;
  bool explicit_weights_ = false;
};

// Per-feature support of a uniform reference distribution: either a closed
// interval or a finite value set.
class FeatureDomain {
 public:
  static FeatureDomain range(double lo, double hi);
  static FeatureDomain values(std::vector<double> values);

  bool is_finite() const { return !values_.empty(); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& value_set() const { return values_; }

 private:
  FeatureDomain() = default;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> values_;
};

struct WeightedReference {
  FeatureVector point;
  double probability = 0.0;
};

// A reference distribution for explanation games. Immutable; sampling takes
// the seed explicitly.
class ReferenceSource {
 public:
  enum class Kind { kEmpirical, kJointMarginal, kUniform, kFiltered, kSinglePoint };

  static ReferenceSource empirical(Dataset data);
  static ReferenceSource joint_marginal(Dataset data);
  static ReferenceSource uniform(FeatureSchema schema,
                                 std::vector<FeatureDomain> domains);
  // Discrete features use their observed values, continuous ones the
  // observed [min, max].
  static ReferenceSource uniform_over(const Dataset& data);
  static ReferenceSource filtered(Dataset data, std::string description);
  static ReferenceSource single_point(FeatureSchema schema, FeatureVector point);

  Kind kind() const { return kind_; }
  int arity() const { return schema_.size(); }
  const FeatureSchema& schema() const { return schema_; }
  bool is_finite() const;
  std::string describe() const;

  // Backing rows for empirical, joint-marginal and filtered sources.
  const Dataset* dataset() const { return data_.get(); }
  const std::vector<FeatureDomain>& domains() const { return domains_; }
  const FeatureVector& point() const { return point_; }
  const std::string& filter_description() const { return description_; }

  // Per-feature (value, probability) pairs sorted by value (joint-marginal).
  const std::vector<std::vector<std::pair<double, double>>>& marginals() const {
    return marginals_;
  }

 private:
  ReferenceSource(Kind kind, FeatureSchema schema);

  Kind kind_;
  FeatureSchema schema_;
  std::shared_ptr<const Dataset> data_;
  std::vector<double> cumulative_;  // over data_ weights
  std::vector<FeatureDomain> domains_;
  FeatureVector point_;
  std::string description_;
  std::vector<std::vector<std::pair<double, double>>> marginals_;
  std::vector<std::vector<double>> marginal_cumulative_;

  friend std::vector<FeatureVector> sample_references(const ReferenceSource&,
                                                      std::size_t, std::uint64_t);
};

std::string_view reference_kind_name(ReferenceSource::Kind kind);

// n i.i.d. draws; identical (src, n, seed) gives identical output.
std::vector<FeatureVector> sample_references(const ReferenceSource& src,
                                             std::size_t n, std::uint64_t seed);

// Largest support enumerate_weighted will materialize.
inline constexpr std::size_t kMaxEnumeratedSupport = std::size_t{1} << 20;

// Full support with probabilities. Duplicate points are merged (first
// appearance order); zero-probability points are dropped.
std::vector<WeightedReference> enumerate_weighted(const ReferenceSource& src);

// Predicate over a row and its model score.
using RowPredicate = std::function<bool(std::span<const double> row, double score)>;

// Restricts `data` to rows satisfying `predicate` with positive weight.
// `scores` holds one model score per row, or is empty when the predicate
// ignores scores (NaN is passed then). Throws kEmptyContrastClass when no
// row qualifies.
ReferenceSource filter_references(const Dataset& data, const RowPredicate& predicate,
                                  std::span<const double> scores = {},
                                  std::string description = "");

// Linear-interpolation quantile of unweighted values (the common "type 7"
// definition); q in [0, 1].
double quantile(std::span<const double> values, double q);

}  // namespace fae

#endif  // FAE_REFERENCES_H_
