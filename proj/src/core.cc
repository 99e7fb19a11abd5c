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

#include "fae/core.h"

#include <cmath>
#include <set>

#include "fae/error.h"

namespace fae {

std::string_view feature_kind_name(FeatureKind kind) {
  return kind == FeatureKind::kDiscrete ? "discrete" : "continuous";
}

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "discrete") return FeatureKind::kDiscrete;
  if (name == "continuous") return FeatureKind::kContinuous;
  throw Error(ErrorKind::kConfig,
              "unknown feature kind '" + std::string(name) +
                  "' (expected discrete or continuous)");
}

FeatureSchema::FeatureSchema(std::vector<std::string> names,
                             std::vector<FeatureKind> kinds)
    : names_(std::move(names)), kinds_(std::move(kinds)) {
  if (names_.empty()) {
    throw Error(ErrorKind::kSchema, "schema must have at least one feature");
  }
  if (names_.size() > static_cast<std::size_t>(kMaxFeatures)) {
    throw Error(ErrorKind::kSchema,
                "schema has " + std::to_string(names_.size()) +
                    " features; at most 64 are supported");
  }
  if (kinds_.size() != names_.size()) {
    throw Error(ErrorKind::kSchema, "feature kinds and names differ in length");
  }
  std::set<std::string_view> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw Error(ErrorKind::kSchema, "empty feature name");
    if (!seen.insert(n).second) {
      throw Error(ErrorKind::kSchema, "duplicate feature name '" + n + "'");
    }
  }
}

FeatureSchema FeatureSchema::with_default_names(int m) {
  if (m < 1) throw Error(ErrorKind::kSchema, "schema needs M >= 1");
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("x" + std::to_string(i));
  return FeatureSchema(std::move(names),
                       std::vector<FeatureKind>(m, FeatureKind::kContinuous));
}

std::optional<int> FeatureSchema::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

bool FeatureSchema::all_discrete() const {
  for (auto k : kinds_) {
    if (k != FeatureKind::kDiscrete) return false;
  }
  return true;
}

void FeatureSchema::check(std::span<const double> x) const {
  if (x.size() != names_.size()) {
    throw Error(ErrorKind::kSchema,
                "feature vector has " + std::to_string(x.size()) +
                    " values; schema expects " + std::to_string(names_.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw Error(ErrorKind::kSchema,
                  "non-finite value for feature '" + names_[i] + "'");
    }
  }
}

Coalition::Coalition(std::initializer_list<int> members) {
  for (int i : members) {
    if (i < 0 || i >= FeatureSchema::kMaxFeatures) {
      throw Error(ErrorKind::kRange, "player index out of range");
    }
    mask_ |= std::uint64_t{1} << i;
  }
}

Coalition Coalition::grand(int m) {
  if (m < 0 || m > FeatureSchema::kMaxFeatures) {
    throw Error(ErrorKind::kRange, "invalid player count");
  }
  return Coalition(m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
}

Coalition Coalition::complement(int m) const {
  return Coalition(grand(m).mask() & ~mask_);
}

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

std::string Coalition::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int i : members()) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

double AttributionVector::total() const {
  double t = baseline;
  for (double p : per_feature) t += p;
  return t;
}

FeatureVector composite_input(std::span<const double> x,
                              std::span<const double> r, Coalition s) {
  FeatureVector z(x.size());
  composite_input_into(x, r, s, z);
  return z;
}

void composite_input_into(std::span<const double> x, std::span<const double> r,
                          Coalition s, std::span<double> out) {
  if (x.size() != r.size() || out.size() != x.size()) {
    throw Error(ErrorKind::kSchema,
                "composite input: length mismatch (" +
                    std::to_string(x.size()) + " vs " +
                    std::to_string(r.size()) + ")");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = s.contains(static_cast<int>(i)) ? x[i] : r[i];
  }
}

}  // namespace fae
