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

#ifndef FAE_CORE_H_
#define FAE_CORE_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fae {

// A point of the tabular input space. Categorical features are integer coded.
using FeatureVector = std::vector<double>;

enum class FeatureKind { kContinuous, kDiscrete };

std::string_view feature_kind_name(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view name);

// Names and kinds of the M model inputs. Immutable once built.
class FeatureSchema {
 public:
  // Upper bound on M imposed by the 64-bit coalition representation.
  static constexpr int kMaxFeatures = 64;

  FeatureSchema(std::vector<std::string> names, std::vector<FeatureKind> kinds);

  // x0, x1, ... all continuous.
  static FeatureSchema with_default_names(int m);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<FeatureKind>& kinds() const { return kinds_; }
  const std::string& name(int i) const { return names_.at(i); }
  FeatureKind kind(int i) const { return kinds_.at(i); }
  std::optional<int> index_of(std::string_view name) const;
  bool all_discrete() const;

  // Throws kSchema when `x` has the wrong length or a non-finite entry.
  void check(std::span<const double> x) const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<FeatureKind> kinds_;
};

// A set of players (feature indices) stored as a 64-bit mask.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t mask) : mask_(mask) {}
  Coalition(std::initializer_list<int> members);

  static constexpr Coalition empty_set() { return Coalition(); }
  static Coalition grand(int m);

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(int i) const { return (mask_ >> i) & 1U; }

  constexpr Coalition with(int i) const {
    return Coalition(mask_ | (std::uint64_t{1} << i));
  }
  constexpr Coalition without(int i) const {
    return Coalition(mask_ & ~(std::uint64_t{1} << i));
  }
  Coalition complement(int m) const;

  std::vector<int> members() const;
  std::string to_string() const;  // "{0,2}"

  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  std::uint64_t mask_ = 0;
};

// Additive attribution: baseline + sum(per_feature) explains f(x).
struct AttributionVector {
  double baseline = 0.0;
  std::vector<double> per_feature;

  double total() const;  // baseline + sum of per_feature
};

// z with z_i = x_i for i in S and z_i = r_i otherwise.
FeatureVector composite_input(std::span<const double> x,
                              std::span<const double> r, Coalition s);

// Allocation-free variant for hot loops; `out` must have x.size() entries.
void composite_input_into(std::span<const double> x, std::span<const double> r,
                          Coalition s, std::span<double> out);

}  // namespace fae

#endif  // FAE_CORE_H_
