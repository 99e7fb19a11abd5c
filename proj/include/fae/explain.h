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

#ifndef FAE_EXPLAIN_H_
#define FAE_EXPLAIN_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fae/core.h"
#include "fae/models.h"
#include "fae/references.h"
#include "fae/shapley.h"

namespace fae {

// Per-reference attributions phi(v_{x, r_j}) with baselines f(r_j).
struct AttributionSample {
  std::vector<std::string> feature_names;
  FeatureVector input;
  double prediction = 0.0;  // f(x)
  std::vector<FeatureVector> references;
  std::vector<AttributionVector> rows;
  // Row probabilities; 1/N for i.i.d. samples.
  std::vector<double> weights;
  // True when rows cover the full support of the source with its exact
  // probabilities rather than an i.i.d. sample.
  bool enumerated = false;
  EstimatorSpec estimator = EstimatorSpec::exact();
  std::uint64_t master_seed = 0;

  std::size_t size() const { return rows.size(); }
  int arity() const { return static_cast<int>(feature_names.size()); }
};

// Draws N references and attributes each single-reference game. Row j is
// estimated with seed derive_seed(master_seed, j), independent of the
// reference draw. Rows may be computed on `threads` workers; the result does
// not depend on the worker count.
AttributionSample attribute_distribution(const ModelHandle& model, const FeatureVector& x,
                                         const ReferenceSource& src,
                                         const EstimatorSpec& estimator, std::size_t n,
                                         std::uint64_t master_seed, int threads = 1);

// One row per support point of a finite source, weighted by its probability.
AttributionSample attribute_enumerated(const ModelHandle& model, const FeatureVector& x,
                                       const ReferenceSource& src,
                                       const EstimatorSpec& estimator = EstimatorSpec::exact(),
                                       int threads = 1);

// Probability-weighted mean attribution and baseline.
AttributionVector expected_attribution(const AttributionSample& sample);

inline constexpr std::array<double, 5> kQuantileLevels = {0.05, 0.25, 0.50, 0.75, 0.95};

struct FeatureSummary {
  double mean = 0.0;
  double ssd = 0.0;
  // Absent when the interval is undefined (N = 1).
  std::optional<double> lo;
  std::optional<double> hi;
  std::array<double, 5> quantiles{};
};

enum class IntervalKind {
  kSem,        // mean +- z * SSD / sqrt(N) over an i.i.d. sample
  kExact,      // enumerated source: no Monte Carlo error
  kUndefined,  // N = 1
};

std::string_view interval_kind_name(IntervalKind kind);

struct SummaryReport {
  std::size_t n = 0;
  double confidence = 0.95;
  double z = 0.0;
  IntervalKind interval = IntervalKind::kUndefined;
  double prediction = 0.0;
  double mean_baseline = 0.0;
  std::vector<FeatureSummary> features;
};

// Two-sided standard normal critical value for `confidence`.
double normal_critical_value(double confidence);

// Mean, SSD, quantiles and confidence interval per feature. Rows estimated
// by subsampled WLS are refused unless `assume_unbiased` is set.
SummaryReport mean_with_ci(const AttributionSample& sample, double confidence = 0.95,
                           bool assume_unbiased = false);

struct ClusterSummary {
  double size_fraction = 0.0;
  double mean_baseline = 0.0;
  std::vector<FeatureSummary> features;  // quantiles left empty
  std::vector<std::size_t> members;
};

struct ClusterReport {
  int k = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<ClusterSummary> clusters;  // largest first
};

inline constexpr int kDefaultClusterCount = 5;

// k-means over the per-feature attribution rows (baselines excluded).
ClusterReport cluster_summary(const AttributionSample& sample, int k, std::uint64_t seed,
                              double confidence = 0.95);

// Features whose value never changes the model output on the full cartesian
// `domain` (one finite value list per feature).
std::vector<int> insensitivity_audit(const Model& model,
                                     std::span<const std::vector<double>> domain);

// Distinct values per feature when every feature is discrete; throws
// kNotEnumerable otherwise.
std::vector<std::vector<double>> discrete_domain(const Dataset& data);

}  // namespace fae

#endif  // FAE_EXPLAIN_H_
