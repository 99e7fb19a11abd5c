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

#include "fae/references.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "fae/error.h"
#include "fae/rng.h"

namespace fae {
namespace {

std::vector<double> cumulative_of(std::span<const double> weights) {
  std::vector<double> cum(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cum[i] = acc;
  }
  return cum;
}

// Index of the first cumulative entry exceeding u * total. Zero-weight
// entries can never be selected.
std::size_t pick(std::span<const double> cumulative, double u) {
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  auto idx = static_cast<std::size_t>(it - cumulative.begin());
  if (idx == cumulative.size()) {
    // u * total rounded up to total: take the last positive-weight entry.
    idx = cumulative.size() - 1;
    while (idx > 0 && cumulative[idx] == cumulative[idx - 1]) --idx;
  }
  return idx;
}

std::vector<WeightedReference> merge_duplicates(std::vector<WeightedReference> in) {
  std::map<FeatureVector, std::size_t> index;
  std::vector<WeightedReference> out;
  for (auto& ref : in) {
    if (ref.probability <= 0.0) continue;
    auto [it, inserted] = index.try_emplace(ref.point, out.size());
    if (inserted) {
      out.push_back(std::move(ref));
    } else {
      out[it->second].probability += ref.probability;
    }
  }
  return out;
}

// Mixed-radix walk over the cartesian product of per-feature supports.
template <typename ValueAt, typename ProbAt>
std::vector<WeightedReference> cartesian(const std::vector<std::size_t>& radix,
                                         ValueAt value_at, ProbAt prob_at) {
  std::size_t total = 1;
  for (std::size_t r : radix) {
    if (r == 0) return {};
    if (total > kMaxEnumeratedSupport / r) {
      throw Error(ErrorKind::kNotEnumerable,
                  "reference support exceeds " +
                      std::to_string(kMaxEnumeratedSupport) + " points");
    }
    total *= r;
  }
  std::vector<WeightedReference> out;
  out.reserve(total);
  std::vector<std::size_t> digit(radix.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    WeightedReference ref;
    ref.point.resize(radix.size());
    ref.probability = 1.0;
    for (std::size_t f = 0; f < radix.size(); ++f) {
      ref.point[f] = value_at(f, digit[f]);
      ref.probability *= prob_at(f, digit[f]);
    }
    out.push_back(std::move(ref));
    // Last feature varies fastest (lexicographic order).
    for (std::size_t f = radix.size(); f-- > 0;) {
      if (++digit[f] < radix[f]) break;
      digit[f] = 0;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(FeatureSchema schema, std::vector<FeatureVector> rows,
                 std::optional<std::vector<double>> weights)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
  for (const auto& row : rows_) schema_.check(row);
  if (weights) {
    explicit_weights_ = true;
    weights_ = std::move(*weights);
    if (weights_.size() != rows_.size()) {
      throw Error(ErrorKind::kSchema, "row weights and rows differ in length");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorKind::kRange, "row weights must be finite and nonnegative");
      }
      total += w;
    }
    if (!rows_.empty() && std::abs(total - 1.0) > 1e-12) {
      throw Error(ErrorKind::kRange, "row weights must sum to 1");
    }
  } else if (!rows_.empty()) {
    weights_.assign(rows_.size(), 1.0 / static_cast<double>(rows_.size()));
  }
}

std::vector<double> Dataset::column(int feature) const {
  std::vector<double> col;
  col.reserve(rows_.size());
  for (const auto& row : rows_) col.push_back(row.at(feature));
  return col;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<FeatureVector> rows;
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i : indices) {
    rows.push_back(rows_.at(i));
    w.push_back(weights_.at(i));
    total += weights_.at(i);
  }
  if (rows.empty()) return Dataset(schema_, {});
  bool identity = indices.size() == rows_.size();
  for (std::size_t i = 0; identity && i < indices.size(); ++i) identity = indices[i] == i;
  if (identity) return *this;
  if (total <= 0.0) {
    throw Error(ErrorKind::kEmptySource, "selected rows carry zero total weight");
  }
  if (!explicit_weights_) return Dataset(schema_, std::move(rows));
  for (double& x : w) x /= total;
  return Dataset(schema_, std::move(rows), std::move(w));
}

// ---------------------------------------------------------------------------
// FeatureDomain

FeatureDomain FeatureDomain::range(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw Error(ErrorKind::kRange, "invalid uniform bounds [" + std::to_string(lo) +
                                       ", " + std::to_string(hi) + "]");
  }
  FeatureDomain d;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

FeatureDomain FeatureDomain::values(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::kRange, "empty value set");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kRange, "non-finite value in value set");
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  FeatureDomain d;
  d.lo_ = values.front();
  d.hi_ = values.back();
  d.values_ = std::move(values);
  return d;
}

// ---------------------------------------------------------------------------
// ReferenceSource

ReferenceSource::ReferenceSource(Kind kind, FeatureSchema schema)
    : kind_(kind), schema_(std::move(schema)) {}

ReferenceSource ReferenceSource::empirical(Dataset data) {
  if (data.empty()) throw Error(ErrorKind::kEmptySource, "empirical source over an empty dataset");
  ReferenceSource src(Kind::kEmpirical, data.schema());
  src.cumulative_ = cumulative_of(data.weights());
  src.data_ = std::make_shared<const Dataset>(std::move(data));
  return src;
}

ReferenceSource ReferenceSource::joint_marginal(Dataset data) {
  if (data.empty()) throw Error(ErrorKind::kEmptySource, "joint-marginal source over an empty dataset");
  ReferenceSource src(Kind::kJointMarginal, data.schema());
  const int m = data.schema().size();
  src.marginals_.resize(m);
  src.marginal_cumulative_.resize(m);
  for (int f = 0; f < m; ++f) {
    std::map<double, double> acc;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.weight(i) > 0.0) acc[data.row(i)[f]] += data.weight(i);
    }
    std::vector<double> probs;
    for (const auto& [value, p] : acc) {
      src.marginals_[f].emplace_back(value, p);
      probs.push_back(p);
    }
    src.marginal_cumulative_[f] = cumulative_of(probs);
  }
  src.data_ = std::make_shared<const Dataset>(std::move(data));
  return src;
}

ReferenceSource ReferenceSource::uniform(FeatureSchema schema,
                                         std::vector<FeatureDomain> domains) {
  if (static_cast<int>(domains.size()) != schema.size()) {
    throw Error(ErrorKind::kSchema, "uniform source needs one domain per feature");
  }
  ReferenceSource src(Kind::kUniform, std::move(schema));
  src.domains_ = std::move(domains);
  return src;
}

ReferenceSource ReferenceSource::uniform_over(const Dataset& data) {
  if (data.empty()) throw Error(ErrorKind::kEmptySource, "uniform source over an empty dataset");
  std::vector<FeatureDomain> domains;
  for (int f = 0; f < data.schema().size(); ++f) {
    auto col = data.column(f);
    if (data.schema().kind(f) == FeatureKind::kDiscrete) {
      domains.push_back(FeatureDomain::values(std::move(col)));
    } else {
      auto [lo, hi] = std::minmax_element(col.begin(), col.end());
      domains.push_back(FeatureDomain::range(*lo, *hi));
    }
  }
  return uniform(data.schema(), std::move(domains));
}

ReferenceSource ReferenceSource::filtered(Dataset data, std::string description) {
  if (data.empty()) {
    throw Error(ErrorKind::kEmptyContrastClass,
                "no reference rows satisfy the filter" +
                    (description.empty() ? std::string() : " '" + description + "'"));
  }
  ReferenceSource src(Kind::kFiltered, data.schema());
  src.cumulative_ = cumulative_of(data.weights());
  src.data_ = std::make_shared<const Dataset>(std::move(data));
  src.description_ = std::move(description);
  return src;
}

ReferenceSource ReferenceSource::single_point(FeatureSchema schema, FeatureVector point) {
  schema.check(point);
  ReferenceSource src(Kind::kSinglePoint, std::move(schema));
  src.point_ = std::move(point);
  return src;
}

bool ReferenceSource::is_finite() const {
  if (kind_ != Kind::kUniform) return true;
  return std::all_of(domains_.begin(), domains_.end(),
                     [](const FeatureDomain& d) { return d.is_finite(); });
}

std::string_view reference_kind_name(ReferenceSource::Kind kind) {
  switch (kind) {
    case ReferenceSource::Kind::kEmpirical: return "empirical";
    case ReferenceSource::Kind::kJointMarginal: return "joint-marginal";
    case ReferenceSource::Kind::kUniform: return "uniform";
    case ReferenceSource::Kind::kFiltered: return "filtered";
    case ReferenceSource::Kind::kSinglePoint: return "point";
  }
  return "unknown";
}

std::string ReferenceSource::describe() const {
  std::string s(reference_kind_name(kind_));
  if (kind_ == Kind::kFiltered && !description_.empty()) s += ":" + description_;
  return s;
}

std::vector<FeatureVector> sample_references(const ReferenceSource& src,
                                             std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::kConfig, "reference sample size must be >= 1");
  CounterRng rng(seed);
  std::vector<FeatureVector> out;
  out.reserve(n);
  using Kind = ReferenceSource::Kind;
  switch (src.kind()) {
    case Kind::kSinglePoint:
      out.assign(n, src.point());
      break;
    case Kind::kEmpirical:
    case Kind::kFiltered: {
      const Dataset& data = *src.dataset();
      if (data.empty()) throw Error(ErrorKind::kEmptySource, "empty reference dataset");
      for (std::size_t j = 0; j < n; ++j) {
        out.push_back(data.row(pick(src.cumulative_, rng.uniform())));
      }
      break;
    }
    case Kind::kJointMarginal: {
      const int m = src.arity();
      for (std::size_t j = 0; j < n; ++j) {
        FeatureVector r(m);
        for (int f = 0; f < m; ++f) {
          r[f] = src.marginals_[f][pick(src.marginal_cumulative_[f], rng.uniform())].first;
        }
        out.push_back(std::move(r));
      }
      break;
    }
    case Kind::kUniform: {
      const int m = src.arity();
      for (std::size_t j = 0; j < n; ++j) {
        FeatureVector r(m);
        for (int f = 0; f < m; ++f) {
          const auto& d = src.domains()[f];
          if (d.is_finite()) {
            r[f] = d.value_set()[rng.below(d.value_set().size())];
          } else {
            r[f] = d.lo() + rng.uniform() * (d.hi() - d.lo());
          }
        }
        out.push_back(std::move(r));
      }
      break;
    }
  }
  return out;
}

std::vector<WeightedReference> enumerate_weighted(const ReferenceSource& src) {
  using Kind = ReferenceSource::Kind;
  switch (src.kind()) {
    case Kind::kSinglePoint:
      return {{src.point(), 1.0}};
    case Kind::kEmpirical:
    case Kind::kFiltered: {
      const Dataset& data = *src.dataset();
      std::vector<WeightedReference> refs;
      for (std::size_t i = 0; i < data.size(); ++i) {
        refs.push_back({data.row(i), data.weight(i)});
      }
      return merge_duplicates(std::move(refs));
    }
    case Kind::kJointMarginal: {
      const auto& marg = src.marginals();
      std::vector<std::size_t> radix;
      for (const auto& m : marg) radix.push_back(m.size());
      return merge_duplicates(cartesian(
          radix, [&](std::size_t f, std::size_t d) { return marg[f][d].first; },
          [&](std::size_t f, std::size_t d) { return marg[f][d].second; }));
    }
    case Kind::kUniform: {
      if (!src.is_finite()) {
        throw Error(ErrorKind::kNotEnumerable,
                    "uniform source over a continuous range cannot be enumerated");
      }
      const auto& doms = src.domains();
      std::vector<std::size_t> radix;
      for (const auto& d : doms) radix.push_back(d.value_set().size());
      return cartesian(
          radix, [&](std::size_t f, std::size_t d) { return doms[f].value_set()[d]; },
          [&](std::size_t f, std::size_t) {
            return 1.0 / static_cast<double>(doms[f].value_set().size());
          });
    }
  }
  return {};
}

ReferenceSource filter_references(const Dataset& data, const RowPredicate& predicate,
                                  std::span<const double> scores,
                                  std::string description) {
  if (!scores.empty() && scores.size() != data.size()) {
    throw Error(ErrorKind::kSchema, "filter scores and dataset rows differ in length");
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.weight(i) <= 0.0) continue;
    const double score =
        scores.empty() ? std::numeric_limits<double>::quiet_NaN() : scores[i];
    if (predicate(data.row(i), score)) keep.push_back(i);
  }
  if (keep.empty()) {
    throw Error(ErrorKind::kEmptyContrastClass,
                "no reference rows satisfy the filter" +
                    (description.empty() ? std::string() : " '" + description + "'"));
  }
  return ReferenceSource::filtered(data.subset(keep), std::move(description));
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::kEmptySource, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::kRange, "quantile level outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace fae
